"""
Point d'entrée principal de l'application en ligne de commande.

Sous-commandes : synth, transform, match, simulate, eval.
Codes de sortie : 0 succès, 1 erreur du domaine ou de fichier, 2 usage invalide.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

from cancelmin.models.experiment import PerturbationModel
from cancelmin.models.matching import MatcherParams
from cancelmin.models.template import Provenance, Template, TemplateKind
from cancelmin.services.config_service import load_experiment_config
from cancelmin.services.eval_service import run_experiment
from cancelmin.services.generator import derive_seed
from cancelmin.services.knn_service import construct_vt
from cancelmin.services.logger import Logger
from cancelmin.services.matcher_service import match
from cancelmin.services.report_service import write_report
from cancelmin.services.simdata_service import get_perturbation, get_profile, simulate_database
from cancelmin.services.synth_service import synthesize_from_seed
from cancelmin.services.xyt_codec import load_template, save_template
from cancelmin.utils.constants import (
    DEFAULT_BETA_TOL,
    DEFAULT_D_MAX,
    DEFAULT_D_TOL,
    DEFAULT_HEIGHT,
    DEFAULT_PROFILE,
    DEFAULT_WIDTH,
    SIMULATED_FILENAME,
)
from cancelmin.utils.errors import CancelminError, ContractError


def load_environment() -> bool:
    """
    Charge le fichier .env de la racine du projet s'il existe.

    Seuls les réglages de journalisation (CANCELMIN_LOG_DIR, CANCELMIN_LOG_LEVEL)
    y sont lus.

    Returns:
        bool: True si un fichier .env a été chargé
    """
    env_path = Path(__file__).parent.parent / ".env"
    if env_path.exists():
        return load_dotenv(env_path)
    return False


def _add_dimensions(parser: argparse.ArgumentParser):
    parser.add_argument("--width", type=int, default=DEFAULT_WIDTH, help=f"Largeur en pixels (défaut {DEFAULT_WIDTH})")
    parser.add_argument("--height", type=int, default=DEFAULT_HEIGHT, help=f"Hauteur en pixels (défaut {DEFAULT_HEIGHT})")


def build_parser() -> argparse.ArgumentParser:
    """Construit l'analyseur d'arguments et ses sous-commandes."""
    parser = argparse.ArgumentParser(
        prog="cancelmin",
        description="Gabarits d'empreintes révocables par plus proches voisins synthétiques.",
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMANDE")
    commands.required = True

    synth = commands.add_parser("synth", help="Génère un gabarit synthétique (ST)")
    synth.add_argument("--seed", type=int, required=True, help="Graine de 64 bits")
    _add_dimensions(synth)
    synth.add_argument("-n", type=int, required=True, help="Nombre de minuties N")
    synth.add_argument("-o", "--out", required=True, help="Fichier .xyt de sortie")

    transform = commands.add_parser("transform", help="Construit un gabarit de vérification (VT)")
    transform.add_argument("--rt", required=True, help="Gabarit source .xyt (RT, ou VT pour chaîner)")
    transform.add_argument("--st", help="Fichier ST .xyt (sinon régénéré depuis --seed et -n)")
    transform.add_argument("--seed", type=int, help="Graine du ST")
    _add_dimensions(transform)
    transform.add_argument("-n", type=int, help="Taille N du ST régénéré")
    transform.add_argument("-l", type=int, required=True, help="Rang L du voisin (1 = plus proche)")
    transform.add_argument("-o", "--out", required=True, help="Fichier .xyt de sortie")

    match_cmd = commands.add_parser("match", help="Apparie deux gabarits et affiche le score")
    match_cmd.add_argument("a", help="Gabarit enregistré (.xyt)")
    match_cmd.add_argument("b", help="Gabarit requête (.xyt)")
    _add_dimensions(match_cmd)
    match_cmd.add_argument("--d-tol", type=float, default=DEFAULT_D_TOL, help="Tolérance relative des longueurs")
    match_cmd.add_argument("--beta-tol", type=float, default=DEFAULT_BETA_TOL, help="Tolérance angulaire (degrés)")
    match_cmd.add_argument("--d-max", type=float, default=DEFAULT_D_MAX, help="Distance au carré maximale dans la CT")

    simulate = commands.add_parser("simulate", help="Simule une base de doigts et d'impressions")
    simulate.add_argument("--seed", type=int, required=True, help="Graine maître")
    simulate.add_argument("--fingers", type=int, required=True, help="Nombre de doigts")
    simulate.add_argument("--impressions", type=int, help="Impressions par doigt (défaut : celui du profil)")
    simulate.add_argument("--profile", default=DEFAULT_PROFILE, help=f"Profil de base (défaut {DEFAULT_PROFILE})")
    simulate.add_argument("--perturbation", default="default", help="Préréglage de perturbation")
    simulate.add_argument("-o", "--out", required=True, help="Dossier de sortie")

    evaluate = commands.add_parser("eval", help="Lance une expérience et écrit le rapport CSV")
    evaluate.add_argument("--config", required=True, help="Fichier de configuration clé=valeur")
    evaluate.add_argument("-o", "--out", required=True, help="Rapport CSV de sortie")

    return parser


def cmd_synth(args: argparse.Namespace) -> int:
    st = synthesize_from_seed(args.seed, args.width, args.height, args.n)
    save_template(args.out, st, with_provenance=True)
    return 0


def content_seed(st: Template) -> int:
    """Graine déterministe tirée du contenu d'un ST (taille, dimensions, triplets)."""
    return derive_seed(len(st), st.width, st.height, *(value for minutia in st for value in minutia))


def _resolve_st(args: argparse.Namespace) -> Template:
    """
    ST de la commande transform : fichier (--st) ou régénération (--seed, -n).

    Pour un fichier sans provenance, la graine vient de --seed, ou à défaut
    du contenu du fichier (content_seed).
    """
    if args.st:
        st = load_template(args.st, args.width, args.height, TemplateKind.SYNTHETIC)
        if st.provenance.st_seed is not None:
            return st
        seed = args.seed
        if seed is None:
            seed = content_seed(st)
            Logger.log_transform_action(
                "Graine du ST",
                f"provenance absente ({args.st}.json), graine tirée du contenu : {seed}",
            )
        return Template(st.minutiae, st.width, st.height, TemplateKind.SYNTHETIC,
                        Provenance(st_seed=seed, st_size=len(st)))
    if args.seed is None or args.n is None:
        raise ContractError("transform exige --st, ou bien --seed et -n.")
    return synthesize_from_seed(args.seed, args.width, args.height, args.n)


def cmd_transform(args: argparse.Namespace) -> int:
    rt = load_template(args.rt, args.width, args.height, TemplateKind.REAL)
    vt = construct_vt(rt, _resolve_st(args), args.l)
    save_template(args.out, vt, with_provenance=True)
    return 0


def cmd_match(args: argparse.Namespace) -> int:
    params = MatcherParams(d_tol=args.d_tol, beta_tol=args.beta_tol, d_max=args.d_max)
    probe = load_template(args.a, args.width, args.height)
    gallery = load_template(args.b, args.width, args.height)
    print(match(probe, gallery, params).score)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    profile = get_profile(args.profile)
    model: PerturbationModel = get_perturbation(args.perturbation)
    impressions = args.impressions if args.impressions is not None else profile.impressions
    database = simulate_database(args.seed, args.fingers, impressions, profile, model)
    out_dir = Path(args.out)
    for i, finger in enumerate(database):
        for j, template in enumerate(finger):
            save_template(out_dir / SIMULATED_FILENAME.format(finger=i, impression=j), template)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config)
    write_report(run_experiment(cfg), args.out)
    return 0


COMMANDS = {
    "synth": cmd_synth,
    "transform": cmd_transform,
    "match": cmd_match,
    "simulate": cmd_simulate,
    "eval": cmd_eval,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Fonction principale : analyse argv et exécute la sous-commande.

    Args:
        argv (List[str], optional): Arguments (sys.argv[1:] par défaut)

    Returns:
        int: Code de sortie (0 succès, 1 erreur ; l'usage invalide sort avec 2 via argparse)
    """
    load_environment()
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (CancelminError, OSError) as e:
        print(f"Erreur : {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
