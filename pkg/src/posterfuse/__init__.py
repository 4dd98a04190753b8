"""posterfuse: political-poster classification by fusing appearance
features with word-count text vectors."""

__version__ = "0.1.0"
