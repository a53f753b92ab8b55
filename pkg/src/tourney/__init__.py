"""Inducibility of small tournaments: census, constructions, search and audits."""
