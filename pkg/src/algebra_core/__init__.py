"""Exact polynomial arithmetic and the module Gröbner engine every other package reduces to."""
