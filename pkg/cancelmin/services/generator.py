"""
Générateurs pseudo-aléatoires de l'application.

SeededGenerator : générateur reproductible. Les mots bruts de 64 bits viennent
du bit generator PCG64 de numpy, initialisé par SeedSequence(seed). Ce flux est
figé par la politique de stabilité des bit generators de numpy : une graine
archivée reproduit le même ST indéfiniment. Les tirages entiers uniformes sont
faits ici par rejet sur le haut de l'intervalle brut (pas de biais modulo).

SecureGenerator : même interface, entropie du système (module secrets).
Non reproductible ; c'est la source à utiliser en production pour générer
les ST des utilisateurs.

derive_seed : mélange documenté (master_seed, composantes...) -> sous-graine
de 64 bits, via SeedSequence(entropy=[master_seed, *composantes]).
"""

import secrets

import numpy as np

from cancelmin.utils.errors import ContractError

WORD_BITS = 64
WORD_RANGE = 1 << WORD_BITS


def derive_seed(master_seed: int, *components: int) -> int:
    """
    Dérive une sous-graine de 64 bits à partir d'une graine maître et de composantes.

    Le mélange est celui de numpy.random.SeedSequence : changer une seule
    composante change tout le sous-flux.

    Args:
        master_seed (int): Graine maître (64 bits non signés)
        *components (int): Indices non négatifs (doigt, N, étiquette de rôle, ...)

    Returns:
        int: Sous-graine dans [0, 2^64)

    Exemples:
        >>> derive_seed(42, 3, 200, 3) == derive_seed(42, 3, 200, 3)
        True
    """
    if master_seed < 0 or any(c < 0 for c in components):
        raise ContractError("Les composantes d'une graine doivent être non négatives.")
    sequence = np.random.SeedSequence([master_seed, *components])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


class SeededGenerator:
    """
    Générateur reproductible, à propriétaire unique et séquentiel.

    Attributs:
        seed (int): Graine de 64 bits non signés
    """

    def __init__(self, seed: int):
        if not 0 <= seed < WORD_RANGE:
            raise ContractError(f"La graine doit tenir sur 64 bits non signés (reçue : {seed}).")
        self._seed = seed
        self._bit_generator = np.random.PCG64(seed)
        # Distributions continues (simulation uniquement), même flux d'état
        self._rng = np.random.Generator(self._bit_generator)

    @property
    def seed(self) -> int:
        return self._seed

    def next_word(self) -> int:
        """Retourne le prochain mot brut de 64 bits."""
        return int(self._bit_generator.random_raw())

    def next_uniform(self, n: int) -> int:
        """
        Tirage entier uniforme dans [0, n).

        Rejette les mots bruts situés dans le haut de l'intervalle
        [2^64 - (2^64 mod n), 2^64), puis réduit modulo n.

        Args:
            n (int): Borne supérieure exclue (>= 1)

        Returns:
            int: Entier uniforme dans [0, n)

        Raises:
            ContractError: Si n < 1
        """
        if n < 1:
            raise ContractError(f"next_uniform exige n >= 1 (reçu : {n}).")
        if n > WORD_RANGE:
            raise ContractError(f"next_uniform exige n <= 2^64 (reçu : {n}).")
        limit = WORD_RANGE - (WORD_RANGE % n)
        while True:
            word = self.next_word()
            if word < limit:
                return word % n

    def uniform(self, low: float, high: float) -> float:
        """Tirage réel uniforme dans [low, high)."""
        return float(self._rng.uniform(low, high))

    def normal(self, mean: float, sigma: float) -> float:
        """Tirage gaussien (sigma = 0 renvoie exactement la moyenne)."""
        if sigma == 0:
            return float(mean)
        return float(self._rng.normal(mean, sigma))

    def random(self) -> float:
        """Tirage réel uniforme dans [0, 1)."""
        return float(self._rng.random())

    def __repr__(self) -> str:
        return f"SeededGenerator(seed={self._seed})"


class SecureGenerator(SeededGenerator):
    """
    Générateur à entropie système, même interface que SeededGenerator.

    Les tirages entiers utilisent secrets.randbits ; les ST qu'il produit ne
    sont pas reproductibles. La "graine" est un identifiant aléatoire du ST,
    enregistré dans la provenance, qui ne permet pas de le régénérer.
    """

    def __init__(self):
        super().__init__(secrets.randbits(WORD_BITS))

    def next_word(self) -> int:
        return secrets.randbits(WORD_BITS)

    def __repr__(self) -> str:
        return "SecureGenerator()"
