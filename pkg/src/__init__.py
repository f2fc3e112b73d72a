"""tradeoff-lab: information gain and disturbance of quantum instruments."""

__version__ = "0.1.0"
