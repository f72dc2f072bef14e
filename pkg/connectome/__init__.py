from .atlas import SYSTEMS, RoiAtlas, RoiEntry, load_atlas, write_atlas
from .correlation import CorrelationMatrix, aggregate, group_average, pearson_correlation
from .network import build_network
from .ratings import EmotionRatings, load_ratings, select_emotion_epochs, write_ratings
from .timeseries import DataError, TimeSeriesMatrix, load_time_series, write_time_series

__all__ = [
    "SYSTEMS",
    "CorrelationMatrix",
    "DataError",
    "EmotionRatings",
    "RoiAtlas",
    "RoiEntry",
    "TimeSeriesMatrix",
    "aggregate",
    "build_network",
    "group_average",
    "load_atlas",
    "load_ratings",
    "load_time_series",
    "pearson_correlation",
    "select_emotion_epochs",
    "write_atlas",
    "write_ratings",
    "write_time_series",
]
