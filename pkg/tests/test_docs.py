import ast
from collections import Counter
from pathlib import Path

CONF_PATH = Path(__file__).resolve().parents[1] / 'doc' / 'source' / 'conf.py'


def _module_assignments():
    tree = ast.parse(CONF_PATH.read_text(encoding='utf-8'))

    return [t.id for node in tree.body if isinstance(node, ast.Assign) for t in node.targets
            if isinstance(t, ast.Name)]


def test_sphinx_settings_are_assigned_once():
    counts = Counter(_module_assignments())
    assert [name for name, c in counts.items() if c > 1] == []
    assert {'project', 'release', 'version', 'extensions', 'html_theme'} <= set(counts)


def test_sphinx_project_documents_the_package():
    text = CONF_PATH.read_text(encoding='utf-8')
    assert "project = 'hssmem'" in text
    assert "'hssmem', 'version.py'" in text
    assert "release = _version['__version__']" in text
