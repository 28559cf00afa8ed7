"""Export modules."""
from .result_exporter import ResultExporter, to_jsonable

__all__ = ['ResultExporter', 'to_jsonable']
