"""
Service d'évaluation : reproduit le protocole expérimental sur une base simulée.

Chaque doigt reçoit UN ST par taille N (partagé par toutes ses impressions).
Les sous-graines mélangent (master_seed, doigt, N, étiquette de rôle) via
derive_seed ; une expérience est donc une fonction pure de sa configuration.

Les unités de travail sont les doigts. Elles peuvent tourner dans un pool de
processus (workers > 1) ; les scores sont toujours fusionnés dans l'ordre des
doigts puis agrégés (moyenne, écart-type de population) en un seul passage.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from itertools import combinations, combinations_with_replacement
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from cancelmin.models.experiment import ExperimentConfig, ExperimentKind, ReportRow
from cancelmin.models.template import Template
from cancelmin.services.generator import derive_seed
from cancelmin.services.knn_service import build_index, chain_generation, construct_vt
from cancelmin.services.logger import Logger
from cancelmin.services.matcher_service import match
from cancelmin.services.simdata_service import simulate_finger
from cancelmin.services.synth_service import synthesize_from_seed
from cancelmin.utils.constants import (
    ROLE_ST,
    ROLE_ST_DIVERSITY,
    ROLE_ST_FIRST_GENERATION,
    ROLE_ST_SECOND_GENERATION,
)
from cancelmin.utils.errors import ConfigError

# (étiquette, N, L, L2) -> scores dans l'ordre des doigts
ScoreKey = Tuple[str, int, int, Optional[int]]
Scores = Dict[ScoreKey, List[int]]

# Parent de 1re génération et enfants de 2e génération d'un doigt :
# (vt1 par impression, {N: {L enfant: vt2 par impression}})
Lineage = Tuple[List[Template], Dict[int, Dict[int, List[Template]]]]


def st_seed(master_seed: int, finger: int, n: int, role: int) -> int:
    """Sous-graine du ST d'un doigt pour une taille N et un rôle donnés."""
    return derive_seed(master_seed, finger, n, role)


def finger_st(cfg: ExperimentConfig, finger: int, n: int, role: int = ROLE_ST) -> Template:
    """
    Génère le ST d'un doigt.

    Args:
        cfg (ExperimentConfig): Configuration (graine maître, dimensions)
        finger (int): Indice du doigt
        n (int): Taille du ST
        role (int): Étiquette de rôle (ST principal, diversité, générations)

    Returns:
        Template: ST de n minuties
    """
    seed = st_seed(cfg.master_seed, finger, n, role)
    return synthesize_from_seed(seed, cfg.profile.width, cfg.profile.height, n)


def finger_impressions(cfg: ExperimentConfig, finger: int) -> List[Template]:
    """Impressions simulées d'un doigt (gabarits réels)."""
    return simulate_finger(cfg.master_seed, finger, cfg.impressions, cfg.profile, cfg.perturbation)


def _warn_small_st(finger: int, st: Template, sources: Sequence[Template]):
    """Signale un ST pas plus grand que le gabarit source (régime N <= M)."""
    largest = max((len(t) for t in sources), default=0)
    if len(st) <= largest:
        Logger.log_eval_action(
            "ST plus petit que le gabarit source",
            f"doigt: {finger}, N: {len(st)}, M: {largest}",
            logging.WARNING,
        )


def _vts_for(sources: Sequence[Template], st: Template, l: int, index=None) -> List[Template]:
    """VT de chaque gabarit source pour un ST et un rang donnés."""
    if index is None:
        index = build_index(st)
    return [construct_vt(source, st, l, index) for source in sources]


def _genuine_scores(templates: Sequence[Template], cfg: ExperimentConfig) -> List[int]:
    """Scores de toutes les paires non ordonnées (i < j) d'impressions d'un doigt."""
    return [match(a, b, cfg.matcher).score for a, b in combinations(templates, 2)]


def _genuine_unit(cfg: ExperimentConfig, finger: int) -> Scores:
    label = ExperimentKind.GENUINE_VT.value
    rts = finger_impressions(cfg, finger)
    scores: Scores = {}
    for n in cfg.n_values:
        st = finger_st(cfg, finger, n)
        _warn_small_st(finger, st, rts)
        index = build_index(st)
        for l in cfg.l_values:
            scores[(label, n, l, None)] = _genuine_scores(_vts_for(rts, st, l, index), cfg)
    return scores


def _rt_vs_vt_unit(cfg: ExperimentConfig, finger: int) -> Scores:
    label = ExperimentKind.RT_VS_VT.value
    rts = finger_impressions(cfg, finger)
    scores: Scores = {}
    for n in cfg.n_values:
        st = finger_st(cfg, finger, n)
        index = build_index(st)
        for l in cfg.l_values:
            vts = _vts_for(rts, st, l, index)
            scores[(label, n, l, None)] = [match(rt, vt, cfg.matcher).score for rt, vt in zip(rts, vts)]
    return scores


def _diversity_unit(cfg: ExperimentConfig, finger: int) -> Scores:
    label = ExperimentKind.DIVERSITY_VT.value
    rts = finger_impressions(cfg, finger)
    scores: Scores = {}
    for n in cfg.n_values:
        st_a = finger_st(cfg, finger, n, ROLE_ST)
        st_b = finger_st(cfg, finger, n, ROLE_ST_DIVERSITY)
        index_a, index_b = build_index(st_a), build_index(st_b)
        for l in cfg.l_values:
            vts_a = _vts_for(rts, st_a, l, index_a)
            vts_b = _vts_for(rts, st_b, l, index_b)
            scores[(label, n, l, None)] = [match(a, b, cfg.matcher).score for a, b in zip(vts_a, vts_b)]
    return scores


def _enrolled_vts(cfg: ExperimentConfig, finger: int) -> Dict[Tuple[int, int], Template]:
    """VT de la première impression d'un doigt, pour chaque (N, L)."""
    rt = finger_impressions(cfg, finger)[0]
    vts = {}
    for n in cfg.n_values:
        st = finger_st(cfg, finger, n)
        index = build_index(st)
        for l in cfg.l_values:
            vts[(n, l)] = construct_vt(rt, st, l, index)
    return vts


def _impostor_unit(
    cfg: ExperimentConfig,
    enrolled: Sequence[Dict[Tuple[int, int], Template]],
    finger: int
) -> Scores:
    """Le doigt `finger` contre tous les doigts d'indice supérieur."""
    label = ExperimentKind.IMPOSTOR_VT.value
    scores: Scores = {}
    for n in cfg.n_values:
        for l in cfg.l_values:
            probe = enrolled[finger][(n, l)]
            scores[(label, n, l, None)] = [
                match(probe, enrolled[other][(n, l)], cfg.matcher).score
                for other in range(finger + 1, len(enrolled))
            ]
    return scores


def _lineage(cfg: ExperimentConfig, finger: int, rts: Sequence[Template]) -> Lineage:
    """
    Construit la lignée d'un doigt : VT parents (N1, L1) puis VT enfants
    sur de nouveaux ST pour chaque N de la grille et chaque L enfant.
    """
    st1 = finger_st(cfg, finger, cfg.first_generation_n, ROLE_ST_FIRST_GENERATION)
    parents = _vts_for(rts, st1, cfg.first_generation_l)
    children: Dict[int, Dict[int, List[Template]]] = {}
    for n in cfg.n_values:
        st2 = finger_st(cfg, finger, n, ROLE_ST_SECOND_GENERATION)
        _warn_small_st(finger, st2, parents)
        index = build_index(st2)
        children[n] = {
            l: [chain_generation(vt, st2, l, index) for vt in parents]
            for l in _child_ordinals(cfg)
        }
    return parents, children


def _child_ordinals(cfg: ExperimentConfig) -> List[int]:
    return sorted(set(cfg.child_l_values))


def _second_generation_unit(cfg: ExperimentConfig, finger: int) -> Scores:
    label = ExperimentKind.SECOND_GENERATION.value
    rts = finger_impressions(cfg, finger)
    _, children = _lineage(cfg, finger, rts)
    scores: Scores = {}
    for n in cfg.n_values:
        for l in _child_ordinals(cfg):
            scores[(label, n, l, None)] = _genuine_scores(children[n][l], cfg)

    if cfg.include_first_generation:
        first_label = ExperimentKind.FIRST_GENERATION.value
        for n in cfg.n_values:
            st = finger_st(cfg, finger, n)
            vts = _vts_for(rts, st, cfg.first_generation_l)
            scores[(first_label, n, cfg.first_generation_l, None)] = _genuine_scores(vts, cfg)
    return scores


def _cross_generation_unit(cfg: ExperimentConfig, finger: int) -> Scores:
    label = ExperimentKind.CROSS_GENERATION.value
    parents, children = _lineage(cfg, finger, finger_impressions(cfg, finger))
    scores: Scores = {}
    for n in cfg.n_values:
        for l in _child_ordinals(cfg):
            scores[(label, n, l, cfg.first_generation_l)] = [
                match(parent, child, cfg.matcher).score
                for parent, child in zip(parents, children[n][l])
            ]
    return scores


def _sibling_unit(cfg: ExperimentConfig, finger: int) -> Scores:
    label = ExperimentKind.SIBLING_MATCHING.value
    _, children = _lineage(cfg, finger, finger_impressions(cfg, finger))
    scores: Scores = {}
    for n in cfg.n_values:
        for l, l2 in combinations_with_replacement(_child_ordinals(cfg), 2):
            scores[(label, n, l, l2)] = [
                match(a, b, cfg.matcher).score
                for a, b in zip(children[n][l], children[n][l2])
            ]
    return scores


def _real_genuine_unit(cfg: ExperimentConfig, finger: int) -> Scores:
    label = ExperimentKind.REAL_GENUINE.value
    return {(label, 0, 0, None): _genuine_scores(finger_impressions(cfg, finger), cfg)}


def _map_fingers(cfg: ExperimentConfig, unit: Callable[[int], Scores], fingers: Sequence[int]) -> List[Scores]:
    """Exécute une unité par doigt ; le résultat suit toujours l'ordre des doigts."""
    if cfg.workers > 1 and len(fingers) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(unit, fingers))
    return [unit(finger) for finger in fingers]


def aggregate(units: Sequence[Scores]) -> List[ReportRow]:
    """
    Fusionne les scores des unités (dans l'ordre reçu) et calcule les lignes du rapport.

    L'écart-type utilise la formule de population (division par le nombre d'essais).
    Les clés sans aucun essai ne produisent pas de ligne.

    Args:
        units (Sequence[Scores]): Scores par unité, dans l'ordre des doigts

    Returns:
        List[ReportRow]: Lignes triées par (experiment, n, l, l2)
    """
    merged: Scores = {}
    for unit in units:
        for key, values in unit.items():
            merged.setdefault(key, []).extend(values)

    rows = []
    for (label, n, l, l2), values in merged.items():
        if not values:
            continue
        samples = np.asarray(values, dtype=np.float64)
        rows.append(ReportRow(
            experiment=label,
            n=n,
            l=l,
            l2=l2,
            mean=float(samples.mean()),
            std=float(samples.std()),
            trials=len(values),
        ))
    return sorted(rows, key=ReportRow.sort_key)


def _require(cfg: ExperimentConfig, *kinds: ExperimentKind):
    if cfg.experiment not in kinds:
        expected = ", ".join(kind.value for kind in kinds)
        raise ConfigError(f"Expérience {cfg.experiment.value} reçue, attendue : {expected}.")
    cfg.validate()


def _run(cfg: ExperimentConfig, unit: Callable[[ExperimentConfig, int], Scores]) -> List[ReportRow]:
    Logger.log_eval_action(
        f"Expérience {cfg.experiment.value}",
        f"graine: {cfg.master_seed}, doigts: {cfg.fingers}, impressions: {cfg.impressions}, "
        f"N: {list(cfg.n_values)}, workers: {cfg.workers}",
    )
    rows = aggregate(_map_fingers(cfg, partial(unit, cfg), range(cfg.fingers)))
    _log_rows(cfg, rows)
    return rows


def _log_rows(cfg: ExperimentConfig, rows: Sequence[ReportRow]):
    for row in rows:
        Logger.log_eval_action(
            f"Ligne {row.experiment}",
            f"N: {row.n}, L: {row.l}, L2: {row.l2}, moyenne: {row.mean:.4f}, "
            f"écart-type: {row.std:.4f}, essais: {row.trials}",
            logging.DEBUG,
        )
    Logger.log_eval_action(
        f"Expérience {cfg.experiment.value} terminée",
        f"{len(rows)} ligne(s), {sum(row.trials for row in rows)} appariement(s)",
    )


def run_genuine_vt(cfg: ExperimentConfig) -> List[ReportRow]:
    """
    Appariements authentiques VT contre VT.

    Pour chaque doigt, chaque N et chaque L : un VT par impression (même ST),
    puis toutes les paires non ordonnées d'impressions sont appariées.
    Essais par ligne : fingers * C(impressions, 2).

    Raises:
        ConfigError: Expérience différente de GenuineVt ou configuration invalide
    """
    _require(cfg, ExperimentKind.GENUINE_VT)
    return _run(cfg, _genuine_unit)


def run_rt_vs_vt(cfg: ExperimentConfig) -> List[ReportRow]:
    """
    Chaque impression réelle contre son propre VT (indicateur de non-réversibilité).

    Essais par ligne : fingers * impressions.
    """
    _require(cfg, ExperimentKind.RT_VS_VT)
    return _run(cfg, _rt_vs_vt_unit)


def run_impostor_and_diversity(cfg: ExperimentConfig) -> List[ReportRow]:
    """
    Appariements imposteurs et de diversité, émis ensemble.

    ImpostorVt : VT de la première impression de deux doigts différents
    (même N, même L, chaque doigt avec son ST), C(fingers, 2) essais par ligne.
    Émis seulement s'il y a au moins deux doigts.

    DiversityVt : même doigt, même impression, deux ST de graines différentes,
    même L ; fingers * impressions essais par ligne.

    Returns:
        List[ReportRow]: Lignes des deux expériences

    Raises:
        ConfigError: ImpostorVt avec moins de deux doigts, configuration invalide
    """
    _require(cfg, ExperimentKind.IMPOSTOR_VT, ExperimentKind.DIVERSITY_VT)
    Logger.log_eval_action(
        "Expérience ImpostorVt/DiversityVt",
        f"graine: {cfg.master_seed}, doigts: {cfg.fingers}, N: {list(cfg.n_values)}, L: {list(cfg.l_values)}",
    )
    fingers = range(cfg.fingers)
    units = _map_fingers(cfg, partial(_diversity_unit, cfg), fingers)
    if cfg.fingers >= 2:
        enrolled = _map_fingers(cfg, partial(_enrolled_vts, cfg), fingers)
        units += _map_fingers(cfg, partial(_impostor_unit, cfg, enrolled), fingers)
    rows = aggregate(units)
    _log_rows(cfg, rows)
    return rows


def run_second_generation(cfg: ExperimentConfig) -> List[ReportRow]:
    """
    Appariements authentiques entre VT de 2e génération.

    Les VT de 1re génération sont construits à (first_generation_n,
    first_generation_l), puis chaînés dans un nouveau ST par doigt pour chaque
    N de la grille et chaque L de child_l_values. Avec include_first_generation,
    ajoute les lignes FirstGeneration (VT de 1re génération, L = first_generation_l).
    """
    _require(cfg, ExperimentKind.SECOND_GENERATION)
    return _run(cfg, _second_generation_unit)


def run_cross_generation(cfg: ExperimentConfig) -> List[ReportRow]:
    """
    VT parent (1re génération) contre chacun de ses VT enfants (2e génération).

    Lignes : l = rang enfant, l2 = rang parent (first_generation_l).
    Essais par ligne : fingers * impressions.
    """
    _require(cfg, ExperimentKind.CROSS_GENERATION)
    return _run(cfg, _cross_generation_unit)


def run_sibling_matching(cfg: ExperimentConfig) -> List[ReportRow]:
    """
    VT frères : même parent, même ST enfant, rangs L différents.

    Toutes les paires (l <= l2) de child_l_values sont appariées, paires
    dégénérées (l = l2) comprises. Essais par ligne : fingers * impressions.
    """
    _require(cfg, ExperimentKind.SIBLING_MATCHING)
    return _run(cfg, _sibling_unit)


def run_real_genuine(cfg: ExperimentConfig) -> List[ReportRow]:
    """
    Référence : appariements authentiques des gabarits réels (n = 0, l = 0).

    Essais : fingers * C(impressions, 2).
    """
    _require(cfg, ExperimentKind.REAL_GENUINE)
    return _run(cfg, _real_genuine_unit)


EXPERIMENT_RUNNERS = {
    ExperimentKind.GENUINE_VT: run_genuine_vt,
    ExperimentKind.RT_VS_VT: run_rt_vs_vt,
    ExperimentKind.IMPOSTOR_VT: run_impostor_and_diversity,
    ExperimentKind.DIVERSITY_VT: run_impostor_and_diversity,
    ExperimentKind.SECOND_GENERATION: run_second_generation,
    ExperimentKind.CROSS_GENERATION: run_cross_generation,
    ExperimentKind.SIBLING_MATCHING: run_sibling_matching,
    ExperimentKind.REAL_GENUINE: run_real_genuine,
}


def run_experiment(cfg: ExperimentConfig) -> List[ReportRow]:
    """
    Lance l'expérience désignée par cfg.experiment.

    Raises:
        ConfigError: Expérience non exécutable seule (FirstGeneration) ou configuration invalide
    """
    runner = EXPERIMENT_RUNNERS.get(cfg.experiment)
    if runner is None:
        raise ConfigError(
            f"L'expérience {cfg.experiment.value} n'est pas exécutable seule "
            f"(utiliser SecondGeneration avec include_first_generation=true)."
        )
    return runner(cfg)
