"""
Module des utilitaires de l'application.
"""
