# Configuration file for the Sphinx documentation builder.
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import sys
from io import StringIO
from os import path
from os.path import basename

from docutils import nodes, statemachine
from docutils.parsers.rst import Directive

# autodoc imports the hssmem package from the repository root
sys.path.insert(0, path.abspath(path.join(path.dirname(__file__), '..', '..')))

# version read from hssmem/version.py, as setup.py does
_version = {}
with open(path.join(path.dirname(__file__), '..', '..', 'hssmem', 'version.py')) as fp:
    exec(fp.read(), _version)


# -- Project information -----------------------------------------------------

project = 'hssmem'
copyright = '2026, hssmem developers'
author = 'hssmem developers'
release = _version['__version__']
version = '.'.join(release.split('.')[:2])


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.mathjax',
    'sphinx.ext.intersphinx',
    'sphinx.ext.napoleon',
    'm2r2',
]

# numpydoc-style sections, no Google style
napoleon_google_docstring = False
napoleon_numpy_docstring = True

autodoc_member_order = 'bysource'

intersphinx_mapping = {
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
    'pandas': ('https://pandas.pydata.org/docs/', None),
    'python': ('https://docs.python.org/3', None),
}

highlight_language = 'python3'
source_suffix = ['.rst', '.md']
master_doc = 'index'
exclude_patterns = []
pygments_style = 'sphinx'


# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'


class ExecDirective(Directive):
    """Execute the specified python code and insert the output into the document"""
    has_content = True

    def run(self):
        old_stdout, sys.stdout = sys.stdout, StringIO()

        tab_width = self.options.get('tab-width', self.state.document.settings.tab_width)
        source = self.state_machine.input_lines.source(self.lineno - self.state_machine.input_offset - 1)

        try:
            exec('\n'.join(self.content))
            text = sys.stdout.getvalue()
            lines = statemachine.string2lines(text, tab_width, convert_whitespace=True)
            self.state_machine.insert_input(lines, source)
            return []
        except Exception:
            return [nodes.error(None, nodes.paragraph(text=f"Unable to execute python code at "
                                                           f"{basename(source)}:{self.lineno}:"),
                                nodes.paragraph(text=str(sys.exc_info()[1])))]
        finally:
            sys.stdout = old_stdout


def setup(app):
    app.add_directive('exec', ExecDirective)
