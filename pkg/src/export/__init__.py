"""Report export for HyperLab"""
from .exporter import ReportExporter, config_hash, provenance, to_jsonable

__all__ = ['ReportExporter', 'config_hash', 'provenance', 'to_jsonable']
