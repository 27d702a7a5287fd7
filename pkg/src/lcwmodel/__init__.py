"""Tree models, splits, amalgams, colored-poset encodings and anchors for graphs of bounded linear cliquewidth."""

__version__ = "0.1.0"
