from typing import List, Literal, Optional

from pydantic import BaseModel


class FitItem(BaseModel):
    level: Literal['INFO', 'WARNING', 'ERROR'] = 'WARNING'
    message: str
    at: Optional[float]


class FitReport(BaseModel):
    """
    Outcome of an empirical O-condition check.

    **Attributes:**

    * **condition** - id of the checked condition (see `summability.lab.enums.Condition`).
    * **constant** - empirical sup of the checked ratio over the sample
        (for condition (200) this is the fitted `K`).
    * **coarse_constant** - the same sup restricted to the coarse half of the sample.
    * **ok** - `True` when the sup is finite and refinement-stable.
    * **values** - the ratio at every sample point, in refinement order.
    * **items** - diagnostics collected while evaluating the condition.
    """
    condition: str
    label: Optional[str]
    constant: float = 0.0
    coarse_constant: float = 0.0
    ok: bool = True
    values: List[float] = []
    items: List[FitItem] = []

    @property
    def k_fit(self):
        return self.constant

    @property
    def errors(self):
        return [item for item in self.items if item.level == 'ERROR']
