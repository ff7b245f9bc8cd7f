"""
Service d'appariement de minuties à la Bozorth : tables de comparaison
intra-gabarit, table de compatibilité inter-gabarits, parcours en toiles.

Convention : x vers la droite, y vers le bas, angles en degrés dans le sens
trigonométrique depuis +x. L'angle d'une droite orientée alpha1 -> alpha2
vaut donc atan2(-(y2 - y1), x2 - x1).
"""

import heapq
from collections import defaultdict
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from cancelmin.models.matching import CompatEntry, ComparisonTable, MatcherParams, MatchResult
from cancelmin.models.template import Template
from cancelmin.services.logger import Logger
from cancelmin.utils.constants import ANGLE_RANGE

HALF_TURN = ANGLE_RANGE / 2
# Marge numérique des comparaisons de seuils en virgule flottante
FLOAT_SLACK = 1e-9


def _angle_diff_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Version vectorisée de angle_diff."""
    delta = np.abs(np.mod(a, ANGLE_RANGE) - np.mod(b, ANGLE_RANGE))
    return np.minimum(delta, ANGLE_RANGE - delta)


def _wrap_angles(values: np.ndarray) -> np.ndarray:
    """Ramène des angles dans [0, 360) (np.mod peut renvoyer 360.0 par arrondi)."""
    wrapped = np.mod(values, ANGLE_RANGE)
    wrapped[wrapped >= ANGLE_RANGE] -= ANGLE_RANGE
    return wrapped


def build_ct(t: Template, p: MatcherParams) -> ComparisonTable:
    """
    Construit la table de comparaison d'un gabarit.

    Pour chaque paire (alpha1 < alpha2) de distance au carré <= d_max :
    d = distance au carré, phi = angle de la droite alpha1 -> alpha2,
    beta1 = (theta1 - phi) mod 360, beta2 = (theta2 - phi) mod 360.

    Args:
        t (Template): Gabarit
        p (MatcherParams): Paramètres (d_max utilisé)

    Returns:
        ComparisonTable: Entrées triées par d, puis (alpha1, alpha2)
    """
    m = len(t)
    if m < 2:
        empty_i = np.zeros(0, dtype=np.int64)
        empty_f = np.zeros(0, dtype=np.float64)
        return ComparisonTable(m, empty_i, empty_i, empty_i, empty_f, empty_f, p.d_max)

    coords = np.array(t.minutiae, dtype=np.int64)
    x, y, theta = coords[:, 0], coords[:, 1], coords[:, 2]
    alpha1, alpha2 = np.triu_indices(m, k=1)
    dx = x[alpha2] - x[alpha1]
    dy = y[alpha2] - y[alpha1]
    d = dx * dx + dy * dy

    keep = d <= p.d_max
    alpha1, alpha2, dx, dy, d = alpha1[keep], alpha2[keep], dx[keep], dy[keep], d[keep]

    phi = np.degrees(np.arctan2(-dy, dx))
    beta1 = _wrap_angles(theta[alpha1] - phi)
    beta2 = _wrap_angles(theta[alpha2] - phi)

    order = np.lexsort((alpha2, alpha1, d))
    return ComparisonTable(
        m,
        alpha1[order].astype(np.int64),
        alpha2[order].astype(np.int64),
        d[order],
        beta1[order],
        beta2[order],
        p.d_max,
    )


def _candidate_pairs(sqrt_p: np.ndarray, sqrt_g: np.ndarray, d_tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Paires (sonde, galerie) dont les longueurs peuvent passer le test relatif.

    Les longueurs de la galerie sont triées : pour chaque longueur a de la sonde,
    les candidates b vérifient a(1 - d_tol) <= b <= a / (1 - d_tol), trouvées par
    recherche dichotomique. Le test exact est refait par l'appelant.
    """
    n_probe, n_gallery = len(sqrt_p), len(sqrt_g)
    if d_tol >= 1:
        lo = np.zeros(n_probe, dtype=np.int64)
        hi = np.full(n_probe, n_gallery, dtype=np.int64)
    else:
        lower = sqrt_p * (1 - d_tol) * (1 - FLOAT_SLACK) - FLOAT_SLACK
        upper = sqrt_p / (1 - d_tol) * (1 + FLOAT_SLACK) + FLOAT_SLACK
        lo = np.searchsorted(sqrt_g, lower, side="left").astype(np.int64)
        hi = np.searchsorted(sqrt_g, upper, side="right").astype(np.int64)

    counts = np.maximum(hi - lo, 0)
    total = int(counts.sum())
    probe_idx = np.repeat(np.arange(n_probe, dtype=np.int64), counts)
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    gallery_idx = np.repeat(lo, counts) + (np.arange(total, dtype=np.int64) - starts)
    return probe_idx, gallery_idx


def build_compat(
    ct_probe: ComparisonTable,
    ct_gallery: ComparisonTable,
    p: MatcherParams
) -> List[CompatEntry]:
    """
    Construit la table de compatibilité entre deux tables de comparaison.

    Une paire d'entrées est compatible si l'écart relatif des longueurs est
    <= d_tol et si les deux écarts angulaires sont <= beta_tol. L'appariement
    croisé (sonde alpha1 <-> galerie alpha2) est testé séparément : la droite
    de la galerie est alors parcourue en sens inverse, ses angles beta sont
    donc décalés de 180°.

    Args:
        ct_probe (ComparisonTable): CT de la sonde (gabarit enregistré)
        ct_gallery (ComparisonTable): CT de la galerie (gabarit requête)
        p (MatcherParams): Seuils

    Returns:
        List[CompatEntry]: Entrées ordonnées par indice sonde, puis galerie, direct avant croisé
    """
    if len(ct_probe) == 0 or len(ct_gallery) == 0:
        return []

    pi, gi = _candidate_pairs(ct_probe.sqrt_d, ct_gallery.sqrt_d, p.d_tol)
    if len(pi) == 0:
        return []

    length_p = ct_probe.sqrt_d[pi]
    length_g = ct_gallery.sqrt_d[gi]
    scale = np.maximum(length_p, length_g)
    gap = np.abs(length_p - length_g)
    length_ok = gap <= p.d_tol * scale + FLOAT_SLACK

    b1p, b2p = ct_probe.beta1[pi], ct_probe.beta2[pi]
    b1g, b2g = ct_gallery.beta1[gi], ct_gallery.beta2[gi]
    tol = p.beta_tol + FLOAT_SLACK

    direct_1 = _angle_diff_array(b1p, b1g)
    direct_2 = _angle_diff_array(b2p, b2g)
    direct_ok = length_ok & (direct_1 <= tol) & (direct_2 <= tol)

    swapped_1 = _angle_diff_array(b1p, b2g - HALF_TURN)
    swapped_2 = _angle_diff_array(b2p, b1g - HALF_TURN)
    swapped_ok = length_ok & (swapped_1 <= tol) & (swapped_2 <= tol)

    d_sel = np.flatnonzero(direct_ok)
    s_sel = np.flatnonzero(swapped_ok)
    probe_all = np.concatenate([pi[d_sel], pi[s_sel]])
    gallery_all = np.concatenate([gi[d_sel], gi[s_sel]])
    flag_all = np.concatenate([np.zeros(len(d_sel), dtype=np.int64), np.ones(len(s_sel), dtype=np.int64)])
    order = np.lexsort((flag_all, gallery_all, probe_all))

    pa1, pa2 = ct_probe.alpha1, ct_probe.alpha2
    ga1, ga2 = ct_gallery.alpha1, ct_gallery.alpha2
    entries: List[CompatEntry] = []
    for k in order:
        i, j, swapped = int(probe_all[k]), int(gallery_all[k]), bool(flag_all[k])
        if swapped:
            correspondence = ((int(pa1[i]), int(ga2[j])), (int(pa2[i]), int(ga1[j])))
        else:
            correspondence = ((int(pa1[i]), int(ga1[j])), (int(pa2[i]), int(ga2[j])))
        entries.append(CompatEntry(i, j, correspondence, swapped))
    return entries


def _components(compat: Sequence[CompatEntry], by_correspondence: Dict[Tuple[int, int], List[int]]) -> List[int]:
    """Composante connexe de chaque entrée (entrées liées par une correspondance partagée)."""
    parent = list(range(len(compat)))

    def find(e: int) -> int:
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for members in by_correspondence.values():
        root = find(members[0])
        for e in members[1:]:
            other = find(e)
            if other != root:
                parent[other] = root
    return [find(e) for e in range(len(compat))]


def _grow(seed: int, compat: Sequence[CompatEntry], by_correspondence: Dict[Tuple[int, int], List[int]]) -> int:
    """
    Fait grandir la toile issue d'une graine et retourne son nombre de correspondances.

    À chaque étape, on ajoute l'entrée d'indice d'émission minimal parmi celles
    qui partagent une correspondance avec la toile et restent cohérentes avec
    sa correspondance un-à-un.
    """
    probe_to_gallery: Dict[int, int] = {}
    gallery_to_probe: Dict[int, int] = {}
    heap = [seed]
    queued = {seed}

    while heap:
        e = heapq.heappop(heap)
        pairs = compat[e].correspondence
        consistent = all(
            probe_to_gallery.get(pm, gm) == gm and gallery_to_probe.get(gm, pm) == pm
            for pm, gm in pairs
        )
        if not consistent:
            # La correspondance ne fait que grandir : l'entrée restera incohérente
            continue
        for pm, gm in pairs:
            probe_to_gallery[pm] = gm
            gallery_to_probe[gm] = pm
            for neighbour in by_correspondence[(pm, gm)]:
                if neighbour not in queued:
                    queued.add(neighbour)
                    heapq.heappush(heap, neighbour)

    return len(probe_to_gallery)


def traverse_score(
    compat: Sequence[CompatEntry],
    probe_size: int,
    gallery_size: int,
    params: Optional[MatcherParams] = None
) -> MatchResult:
    """
    Parcourt la table de compatibilité et retourne le score.

    Chaque entrée sert de graine. La toile grandit en ajoutant toujours
    l'entrée liée et cohérente d'indice d'émission minimal (voir _grow).
    Le score est le nombre de correspondances distinctes de la plus grande
    toile.

    Une toile reste dans la composante connexe de sa graine et ne dépasse
    pas min(minuties distinctes côté sonde, côté galerie) de cette
    composante. Les graines dont la borne ne dépasse pas le meilleur score
    courant sont sautées, ce qui ne change pas le maximum.

    Args:
        compat (Sequence[CompatEntry]): Sortie de build_compat
        probe_size (int): Nombre de minuties de la sonde
        gallery_size (int): Nombre de minuties de la galerie
        params (MatcherParams, optional): Paramètres recopiés dans le résultat

    Returns:
        MatchResult: Score, nombre d'entrées de compatibilité, paramètres
    """
    if not compat:
        return MatchResult(0, 0, params)

    by_correspondence: Dict[Tuple[int, int], List[int]] = defaultdict(list)
    for e, entry in enumerate(compat):
        for pair in entry.correspondence:
            by_correspondence[pair].append(e)

    component = _components(compat, by_correspondence)
    probe_side: Dict[int, Set[int]] = defaultdict(set)
    gallery_side: Dict[int, Set[int]] = defaultdict(set)
    for (pm, gm), members in by_correspondence.items():
        root = component[members[0]]
        probe_side[root].add(pm)
        gallery_side[root].add(gm)
    cap = min(probe_size, gallery_size)
    bound = {root: min(len(probe_side[root]), len(gallery_side[root]), cap) for root in probe_side}

    # Composantes les plus prometteuses d'abord, graines dans l'ordre d'émission
    seeds = sorted(range(len(compat)), key=lambda e: (-bound[component[e]], e))
    best = 0
    for seed in seeds:
        if bound[component[seed]] <= best:
            continue
        best = max(best, _grow(seed, compat, by_correspondence))

    return MatchResult(best, len(compat), params)


def match(probe: Template, gallery: Template, p: Optional[MatcherParams] = None) -> MatchResult:
    """
    Apparie deux gabarits (enregistré, requête).

    La symétrie du score en ses arguments n'est pas garantie.

    Args:
        probe (Template): Gabarit enregistré
        gallery (Template): Gabarit requête
        p (MatcherParams, optional): Seuils (défauts si None)

    Returns:
        MatchResult: Résultat de l'appariement
    """
    params = p if p is not None else MatcherParams()
    compat = build_compat(build_ct(probe, params), build_ct(gallery, params), params)
    result = traverse_score(compat, len(probe), len(gallery), params)
    Logger.log_match_action(
        "Appariement",
        f"{len(probe)} vs {len(gallery)} minutie(s), compatibilités: {result.compat_count}, score: {result.score}",
    )
    return result
