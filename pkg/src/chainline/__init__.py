"""Product-line toolchain for on-chain traceability applications.

Load a feature model, configure a product interactively under constraint
propagation, and render a ready-to-deploy blockchain product from a
logic-less template suite; a gas-cost model compares cumulative deployment
and execution costs of the two architectures involved.
"""

from .configurator import (
    Configuration,
    Decision,
    Origin,
    PropagationResult,
    State,
    Status,
    decide,
    finalize,
    load_configuration,
    new_configuration,
    serialize_configuration,
    undo,
)
from .errors import ChainlineError
from .gascost import CostScenario, Policy, adjusted_execution, crossover, cumulative_cost
from .generator import (
    ArchitecturePlan,
    GenerationContext,
    ProductManifest,
    build_context,
    generate_product,
    plan_architecture,
    verify_product,
)
from .model import (
    ConstraintOp,
    CrossTreeConstraint,
    Feature,
    FeatureModel,
    GroupKind,
    ParentLink,
    count_configurations,
    enumerate_configurations,
    validate_model,
)
from .parser import parse_model, serialize_model
from .template import (
    DelimiterPair,
    PLAIN_DELIMITERS,
    SOLIDITY_DELIMITERS,
    TemplateAst,
    parse_template,
    render,
    render_file,
)

__version__ = "0.1.0"
