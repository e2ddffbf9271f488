from app.schemas.problem import ComponentSpec, DiscSpec, FormSpec, ProblemFile, ProblemOptions
from app.schemas.report import (
    ComponentReport,
    CrossCheck,
    ErrorReport,
    GlobalReport,
    PointReport,
    Provenance,
    Report,
)

# Export all schemas
__all__ = [
    'ProblemFile', 'FormSpec', 'ComponentSpec', 'DiscSpec', 'ProblemOptions',
    'Report', 'ComponentReport', 'PointReport', 'CrossCheck', 'GlobalReport',
    'Provenance', 'ErrorReport',
]
