"""readlens: implicit interest indicators from web reading behavior.

Ingests client-captured interaction events, reconstructs per-session
timelines, derives per-fragment interest indicators, correlates them with
explicit ratings per user, and predicts interest in content via a
correlation-weighted average of normalized indicator values.
"""
from .analysis import AnalysisResult, analyze_store
from .indicators import IndicatorConfig, derive_session_indicators
from .model import (
    DeviceClass,
    ExplicitRating,
    Fragment,
    IndicatorKind,
    IndicatorValue,
    PageClass,
    RawEvent,
    Rect,
    Session,
    User,
    Webpage,
    likert_to_unit,
    rect_intersection,
    visibility_fraction,
)
from .replay import replay
from .service import IngestionService, ServiceConfig, create_app
from .stats import (
    CorrelationRecord,
    InterestPrediction,
    UserModel,
    aggregate_table,
    build_user_model,
    normalize_value,
    p_two_tailed,
    pearson_r,
    predict_interest,
    user_correlations,
)
from .store import Store
from .synth import ARCHETYPES, synthesize
from .timeline import build_timeline, segment_activity, viewport_at

__version__ = "0.1.0"

__all__ = [
    "AnalysisResult",
    "ARCHETYPES",
    "CorrelationRecord",
    "DeviceClass",
    "ExplicitRating",
    "Fragment",
    "IndicatorConfig",
    "IndicatorKind",
    "IndicatorValue",
    "IngestionService",
    "InterestPrediction",
    "PageClass",
    "RawEvent",
    "Rect",
    "ServiceConfig",
    "Session",
    "Store",
    "User",
    "UserModel",
    "Webpage",
    "aggregate_table",
    "analyze_store",
    "build_timeline",
    "build_user_model",
    "create_app",
    "derive_session_indicators",
    "likert_to_unit",
    "normalize_value",
    "p_two_tailed",
    "pearson_r",
    "predict_interest",
    "rect_intersection",
    "replay",
    "segment_activity",
    "synthesize",
    "user_correlations",
    "viewport_at",
    "visibility_fraction",
]
