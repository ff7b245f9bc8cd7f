"""
Cancelmin - gabarits d'empreintes digitales révocables.

Un gabarit de vérification (VT) est formé, pour chaque minutie réelle, du
L-ième plus proche voisin dans un gabarit synthétique (ST) tiré d'une graine.
"""

__version__ = "1.0.0"
