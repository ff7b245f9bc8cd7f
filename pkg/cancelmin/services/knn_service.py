"""
Service k plus proches voisins : index spatial sur un ST, construction des
gabarits de vérification (VT) et chaînage multi-générations.

Distance : carré de la distance euclidienne sur (x, y) uniquement, en entiers.
Égalités départagées par indice ST croissant.
"""

import logging
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from cancelmin.models.minutia import Minutia
from cancelmin.models.template import Provenance, Template, TemplateKind
from cancelmin.services.logger import Logger
from cancelmin.utils.errors import ContractError
from cancelmin.utils.validators import validate_positive


class NeighborResult(NamedTuple):
    """
    Voisins d'une requête, triés par (distance_sq, st_index).

    Attributs:
        query (Minutia): Minutie requête
        neighbors (Tuple[Tuple[int, int], ...]): Paires (st_index, distance_sq)
    """
    query: Minutia
    neighbors: Tuple[Tuple[int, int], ...]

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(index for index, _ in self.neighbors)


class SpatialIndex:
    """
    Index spatial immuable sur les positions (x, y) d'un ST.

    Arbre kd équilibré (scipy cKDTree) suivi d'un reclassement exact en
    entiers, ce qui garantit le même ordre que la recherche exhaustive.
    """

    def __init__(self, st: Template):
        self._st = st
        self._xy = np.array([(m.x, m.y) for m in st], dtype=np.int64).reshape(-1, 2)
        self._tree = cKDTree(self._xy.astype(np.float64), balanced_tree=True)

    @property
    def st(self) -> Template:
        return self._st

    @property
    def size(self) -> int:
        return len(self._xy)

    def query_many(self, queries: Sequence[Minutia], k: int) -> List[NeighborResult]:
        """
        Recherche les k plus proches voisins de plusieurs requêtes.

        Args:
            queries (Sequence[Minutia]): Requêtes
            k (int): Nombre de voisins (1 <= k <= taille du ST)

        Returns:
            List[NeighborResult]: Un résultat par requête, dans l'ordre des requêtes
        """
        _check_k(k, self.size)
        if not queries:
            return []
        points = np.array([(q.x, q.y) for q in queries], dtype=np.int64)
        _, approx = self._tree.query(points.astype(np.float64), k=k)
        approx = np.asarray(approx).reshape(len(points), k)

        # Rayon exact couvrant au moins k points : le max des d² des k points renvoyés
        diff = self._xy[approx] - points[:, None, :]
        bound = (diff * diff).sum(axis=2).max(axis=1)
        radii = np.sqrt(bound.astype(np.float64)) * (1 + 1e-9) + 1e-9
        balls = self._tree.query_ball_point(points.astype(np.float64), r=radii)

        results = []
        for query, point, ball, limit in zip(queries, points, balls, bound):
            candidates = np.asarray(ball, dtype=np.int64)
            delta = self._xy[candidates] - point
            dist_sq = (delta * delta).sum(axis=1)
            keep = dist_sq <= limit
            candidates, dist_sq = candidates[keep], dist_sq[keep]
            order = np.lexsort((candidates, dist_sq))[:k]
            results.append(NeighborResult(
                query,
                tuple((int(candidates[i]), int(dist_sq[i])) for i in order),
            ))
        return results


def _check_k(k: int, size: int):
    validate_positive(k, "k")
    if k > size:
        raise ContractError(f"k = {k} dépasse la taille du ST ({size}).")


def _check_synthetic(st: Template):
    if st.kind != TemplateKind.SYNTHETIC:
        raise ContractError(f"Un gabarit synthétique (ST) est attendu, reçu : {st.kind.value}.")


def build_index(st: Template) -> SpatialIndex:
    """
    Construit l'index spatial d'un ST.

    Args:
        st (Template): ST non vide

    Returns:
        SpatialIndex: Index sur toutes les positions du ST

    Raises:
        ContractError: ST vide ou gabarit non synthétique
    """
    _check_synthetic(st)
    if len(st) == 0:
        raise ContractError("Impossible d'indexer un ST vide.")
    return SpatialIndex(st)


def brute_force_knn(st: Template, q: Minutia, k: int) -> NeighborResult:
    """
    Oracle exhaustif des k plus proches voisins.

    Args:
        st (Template): ST
        q (Minutia): Requête (theta ignoré)
        k (int): Nombre de voisins (1 <= k <= |st|)

    Returns:
        NeighborResult: Voisins triés par (distance_sq, st_index)
    """
    _check_k(k, len(st))
    ranked = sorted(
        ((m.x - q.x) ** 2 + (m.y - q.y) ** 2, index)
        for index, m in enumerate(st)
    )
    return NeighborResult(q, tuple((index, dist_sq) for dist_sq, index in ranked[:k]))


def query_knn(index: SpatialIndex, q: Minutia, k: int) -> NeighborResult:
    """
    k plus proches voisins via l'index ; même contrat que brute_force_knn.
    """
    return index.query_many([q], k)[0]


def rt_vt_collisions(rt: Template, vt: Template) -> int:
    """
    Diagnostic : nombre de triplets réels présents dans le VT (RT ∩ VT).

    Un point aléatoire du ST peut coïncider avec une minutie réelle ; la
    construction ne l'empêche pas, on le compte.
    """
    return len(rt.minutia_set() & vt.minutia_set())


def select_ordinal(rt: Template, index: SpatialIndex, l: int) -> List[int]:
    """
    Indices ST sélectionnés (l-ième voisin) pour chaque minutie du RT, avec répétitions.

    Returns:
        List[int]: Colonne l des listes de voisins, dans l'ordre du RT
    """
    return [result.neighbors[l - 1][0] for result in index.query_many(list(rt), l)]


def construct_vt(
    rt: Template,
    st: Template,
    l: int,
    index: Optional[SpatialIndex] = None
) -> Template:
    """
    Construit le gabarit de vérification : le l-ième voisin ST de chaque minutie réelle.

    Args:
        rt (Template): Gabarit source (RT, ou VT pour le chaînage)
        st (Template): ST
        l (int): Rang du voisin (1 = plus proche)
        index (SpatialIndex, optional): Index déjà construit sur st (réutilisé s'il est fourni)

    Returns:
        Template: VT, sous-ensemble de st, doublons fusionnés (ordre de première sélection)

    Raises:
        ContractError: l > |st|, dimensions différentes, types de gabarits invalides
    """
    _check_synthetic(st)
    if rt.kind == TemplateKind.SYNTHETIC:
        raise ContractError("La source d'un VT doit être un RT ou un VT, pas un ST.")
    validate_positive(l, "l")
    if l > len(st):
        raise ContractError(f"L = {l} dépasse la taille du ST ({len(st)}).")
    if not rt.same_dimensions(st):
        raise ContractError(
            f"Dimensions différentes : source {rt.width}x{rt.height}, ST {st.width}x{st.height}."
        )
    if st.provenance.st_seed is None:
        raise ContractError("La graine du ST est inconnue : impossible d'enregistrer la provenance du VT.")

    selected: Dict[int, None] = {}
    if len(rt) > 0:
        if index is None:
            index = build_index(st)
        for st_index in select_ordinal(rt, index, l):
            selected.setdefault(st_index, None)

    minutiae = [st[i] for i in selected]
    if not set(minutiae) <= st.minutia_set():
        raise ContractError("Le VT construit n'est pas inclus dans le ST.")

    provenance = Provenance(
        finger_id=rt.provenance.finger_id,
        impression_id=rt.provenance.impression_id,
        generation=rt.generation + 1,
        st_seed=st.provenance.st_seed,
        ordinal_l=l,
        st_size=len(st),
    )
    vt = Template(minutiae, st.width, st.height, TemplateKind.VERIFICATION, provenance)

    collisions = rt_vt_collisions(rt, vt)
    if collisions:
        Logger.log_transform_action(
            "Collision RT/VT",
            f"{collisions} minutie(s) réelle(s) présente(s) dans le VT (graine: {provenance.st_seed}, L: {l})",
            logging.WARNING,
        )
    Logger.log_transform_action(
        "Construction de VT",
        f"source: {len(rt)} minutie(s), N: {len(st)}, L: {l}, VT: {len(vt)}, génération: {vt.generation}",
        logging.DEBUG,
    )
    return vt


def chain_generation(
    vt_prev: Template,
    st_new: Template,
    l_new: int,
    index: Optional[SpatialIndex] = None
) -> Template:
    """
    Construit la génération suivante en traitant un VT comme gabarit réel.

    Raises:
        ContractError: vt_prev n'est pas un VT, ou erreurs de construct_vt
    """
    if vt_prev.kind != TemplateKind.VERIFICATION:
        raise ContractError(f"Le chaînage exige un VT, reçu : {vt_prev.kind.value}.")
    return construct_vt(vt_prev, st_new, l_new, index)


def reissue_vt(rt: Template, old_vt: Template, st_new: Template, l_new: int) -> Template:
    """
    Révoque un VT et en émet un nouveau pour le même doigt.

    Les deux conditions de sûreté multi-VT sont imposées : un ST différent
    (autre graine) et un rang L différent.

    Args:
        rt (Template): Gabarit réel du doigt
        old_vt (Template): VT révoqué
        st_new (Template): Nouveau ST
        l_new (int): Nouveau rang

    Returns:
        Template: Nouveau VT

    Raises:
        ContractError: Même graine de ST ou même rang que l'ancien VT
    """
    old = old_vt.provenance
    if st_new.provenance.st_seed is not None and st_new.provenance.st_seed == old.st_seed:
        raise ContractError("Réémission refusée : le nouveau ST doit provenir d'une autre graine.")
    if l_new == old.ordinal_l:
        raise ContractError(f"Réémission refusée : le rang L doit changer (ancien : {old.ordinal_l}).")
    vt = construct_vt(rt, st_new, l_new)
    Logger.log_transform_action(
        "Réémission de VT",
        f"ancienne graine: {old.st_seed}, ancien L: {old.ordinal_l} -> graine: {st_new.provenance.st_seed}, L: {l_new}",
    )
    return vt
