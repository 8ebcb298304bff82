"""Election prediction from Wikipedia pageviews, media mentions, and campaign receipts."""

__version__ = "0.1.0"
