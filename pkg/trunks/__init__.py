from .export import export_hierarchy, import_hierarchy, read_hierarchy, write_composition, write_hierarchy
from .hierarchy import (
    EmotionalArea,
    HierarchyError,
    Trunk,
    TrunkHierarchy,
    area_at,
    composition_rows,
    decompose,
    system_composition,
)

__all__ = [
    "EmotionalArea",
    "HierarchyError",
    "Trunk",
    "TrunkHierarchy",
    "area_at",
    "composition_rows",
    "decompose",
    "export_hierarchy",
    "import_hierarchy",
    "read_hierarchy",
    "system_composition",
    "write_composition",
    "write_hierarchy",
]
