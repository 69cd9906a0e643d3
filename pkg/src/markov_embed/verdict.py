from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np


class Status(str, Enum):
    EMBEDDABLE = "Embeddable"
    NON_EMBEDDABLE = "NonEmbeddable"
    UNDECIDED = "Undecided"


class Method(str, Enum):
    KENDALL = "kendall"
    EQUAL_INPUT = "equal_input"
    CYCLIC_VANDERMONDE = "cyclic_vandermonde"
    D3_CLOSED_FORM = "d3_closed_form"
    SERIES = "series"


@dataclass(frozen=True)
class EmbedVerdict:
    """Outcome of an embeddability decision.

    ``generator`` is set exactly when ``status`` is ``EMBEDDABLE``;
    ``unique_in_zero_row_sum_algebra`` records whether the generator is the
    only real logarithm with zero row sums.
    """

    status: Status
    generator: Optional[np.ndarray] = None
    method: Optional[Method] = None
    unique_in_zero_row_sum_algebra: bool = False
    monotone_generator: bool = False
    reason: str = ""

    @property
    def embeddable(self):
        return self.status is Status.EMBEDDABLE
