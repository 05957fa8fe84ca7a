"""Exact probability on finite sample spaces."""
