from config import Config

from .storage import GraphStorage, ReportStorage

graph_storage = GraphStorage(Config.CACHE_DIR)
report_storage = ReportStorage(Config.CACHE_DIR)
