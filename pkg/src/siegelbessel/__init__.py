"""Class-group Bessel periods of degree-2 Siegel modular forms and the
L-value identities they satisfy."""

__version__ = "0.1.0"
