"""Melanoma prevention and early-detection toolkit.

Two halves: a sun-exposure engine that estimates time-to-skin-burn from UV
index, skin type, environment, altitude, and SPF; and a dermoscopy pipeline
that removes hair, segments the lesion, extracts a 55-value descriptor, and
classifies lesions as normal, atypical, or melanoma through a two-stage
k-NN cascade, exposed over HTTP and a CLI.
"""

__version__ = "0.1.0"
