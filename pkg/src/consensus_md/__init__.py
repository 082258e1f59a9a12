"""Majority dynamics for incomplete preferences.

Library layout:

* ``prefcore``  — preferences, profiles, closure, tiers, support.
* ``consensus`` — the seven consensus notions and quality predicates.
* ``dynamics``  — the per-pair majority update process and order enumeration.
* ``analysis``  — effect classification and agenda-control search.
* ``gen``       — random generators and the counterexample catalog.
* ``batch``     — vectorised engines behind the experiment harness.
* ``harness``   — experiment drivers and CSV persistence.
* ``cli``       — the ``consensus-md`` command line.
"""

from .prefcore import (
    ClosureCreatesCycle,
    InvalidProfileError,
    Preference,
    Profile,
    SameAlternative,
    TierPartition,
    Violation,
    completeness_level,
    support,
    tier_partition,
    transitive_closure,
    validate_preference,
)
from .consensus import (
    ALL_NOTIONS,
    NO_CONSENSUS,
    Notion,
    condorcet_loser,
    condorcet_winner,
    consensus,
    dominant_alternative,
    dominated_by_all,
    undominated_set,
)
from .dynamics import (
    StepTrace,
    UpdateOrder,
    enumerate_update_orders,
    lexicographic_order,
    md_run,
    md_step,
)
from .analysis import (
    ControlReport,
    Effect,
    EffectRecord,
    classify_effect,
    control_search,
    loser_to_winner_check,
)
from .gen import (
    GenKind,
    GenPolicy,
    counterexample_catalog,
    random_partial_preference,
    random_weak_ordering,
)

__version__ = "0.1.0"
