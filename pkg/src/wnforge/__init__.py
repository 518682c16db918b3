"""wnforge: build and maintain multilingual WordNet-style lexical KBs.

The toolkit links words of new languages to an existing pivot wordnet's
synsets using structural dictionary criteria and Levin-class joins,
estimates each method's reliability from validated samples, and manages
the resulting KB (edits, history, consultation, export) behind a CLI and
an HTTP service.
"""

__version__ = "0.1.0"
