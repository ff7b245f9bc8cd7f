"""
Module des services de l'application.
Contient la logique métier : format .xyt, générateurs, synthèse des ST,
plus proches voisins, matcher, simulation, évaluation, rapports et configuration.
"""
