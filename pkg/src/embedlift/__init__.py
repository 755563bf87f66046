from embedlift.datastore import datastore
from embedlift.settings import settings

__version__ = "2026.10.0"
__all__ = ["settings", "datastore"]
