"""
Constantes de l'application (dimensions, seuils du matcher, préréglages, etc.).
"""

# Plage des orientations (degrés entiers, [0, 360))
ANGLE_RANGE = 360

# Dimensions par défaut d'un gabarit (image FVC2004 : 640x480)
DEFAULT_WIDTH = 640
DEFAULT_HEIGHT = 480

# Seuils par défaut du matcher
# d_tol : tolérance relative sur les longueurs de segments
# beta_tol : tolérance angulaire en degrés
# d_max : distance maximale au carré retenue dans la table de comparaison (125 px)
DEFAULT_D_TOL = 0.05
DEFAULT_BETA_TOL = 11.0
DEFAULT_D_MAX = float(125 * 125)

# Seuils du préréglage "strict" (campagnes d'évaluation)
STRICT_D_TOL = 0.02
STRICT_BETA_TOL = 4.0

# Modèle de perturbation par défaut (variations entre deux impressions)
DEFAULT_MAX_ROTATION = 10.0
DEFAULT_MAX_TRANSLATION = 20.0
DEFAULT_JITTER_SIGMA = 3.0
DEFAULT_THETA_JITTER_SIGMA = 6.0
DEFAULT_DROP_PROB = 0.15
DEFAULT_SPURIOUS_COUNT_MAX = 5

# Emprise par défaut : fraction de chaque axe de l'image couverte par l'ellipse du doigt
DEFAULT_FOOTPRINT = 0.7

# Profils de bases de données simulées
# nom -> (moyenne, écart-type, minimum, largeur, hauteur, impressions par doigt, emprise)
FINGER_PROFILES = {
    "fvc2004": (58.0, 18.0, 2, 640, 480, 8, DEFAULT_FOOTPRINT),
    "fvc2006": (121.0, 27.0, 2, 400, 560, 12, DEFAULT_FOOTPRINT),
    "polyu": (136.0, 47.0, 2, 640, 480, 10, DEFAULT_FOOTPRINT),
}
DEFAULT_PROFILE = "fvc2004"

# Préréglages de perturbation
# nom -> (rotation, translation, jitter, jitter theta, drop, parasites max)
PERTURBATION_PRESETS = {
    "default": (
        DEFAULT_MAX_ROTATION,
        DEFAULT_MAX_TRANSLATION,
        DEFAULT_JITTER_SIGMA,
        DEFAULT_THETA_JITTER_SIGMA,
        DEFAULT_DROP_PROB,
        DEFAULT_SPURIOUS_COUNT_MAX,
    ),
    "none": (0.0, 0.0, 0.0, 0.0, 0.0, 0),
    "calibrated": (2.0, 3.0, 5.0, 3.0, 0.2, 2),
}

# Protocole de seconde génération : VT de 1re génération construits avec N=1000 et L=6
FIRST_GENERATION_N = 1000
FIRST_GENERATION_L = 6
CHILD_L_VALUES = (1, 6, 11, 16)

# Étiquettes de rôle mélangées dans la dérivation des sous-graines
ROLE_FINGER = 1
ROLE_IMPRESSION = 2
ROLE_ST = 3
ROLE_ST_DIVERSITY = 4
ROLE_ST_FIRST_GENERATION = 5
ROLE_ST_SECOND_GENERATION = 6

# Rapport CSV
REPORT_HEADER = ("experiment", "n", "l", "l2", "mean", "std", "trials")
REPORT_DECIMALS = 4

# Fichiers
XYT_SUFFIX = ".xyt"
PROVENANCE_SUFFIX = ".json"
SIMULATED_FILENAME = "finger{finger}_imp{impression}.xyt"

# Variables d'environnement (journalisation uniquement)
# Pour définir : CANCELMIN_LOG_DIR=/tmp/logs dans le fichier .env
LOG_DIR_ENV = "CANCELMIN_LOG_DIR"
LOG_LEVEL_ENV = "CANCELMIN_LOG_LEVEL"
LOG_DATE_FORMAT = "%d/%m/%Y %H:%M:%S"
