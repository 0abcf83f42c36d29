major = 0
minor = 1
micro = 0

# optional release tags, e.g. pre_release = 'rc1'
pre_release = None
post_release = None
dev_release = None


def build_version(mjr, mnr, mcr, pre=None, post=None, dev=None):
    """
    Assemble a PEP 440 version string.

    Returns
    -------
    version: str
        version string
    """
    version = '.'.join(str(v) for v in (mjr, mnr, mcr) if v is not None)
    if pre is not None:
        version += f'{pre}'
    if post is not None:
        version += f'.post{post}'
    if dev is not None:
        version += f'.dev{dev}'

    return version


__version__ = build_version(major, minor, micro, pre_release, post_release, dev_release)
