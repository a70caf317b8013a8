""" Utility helpers. """

from .ids import dot_name, gvquote, id_key, sorted_ids
