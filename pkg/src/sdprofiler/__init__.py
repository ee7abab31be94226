"""Socio-demographic profiling of web-community members.

Infers gender, age group, and professional sphere from what members post,
using lexicons of weighted linguistic and graphic markers, and verifies
the result against what members declared about themselves.
"""

from .corpus import (
    DeclaredProfile,
    Post,
    UserCorpus,
    attach_declared,
    ingest_labeled,
    ingest_posts,
)
from .errors import (
    ConflictingLabel,
    DuplicatePost,
    ParseError,
    ProfilerError,
    TooFewClasses,
    TrainTestOverlap,
    UnknownValueCode,
    ValidationError,
)
from .lexicon import (
    CharacteristicValue,
    IndicativeCharacteristic,
    IndicatorCode,
    Lexicon,
    Marker,
    MatchRegulations,
    default_lexicon_path,
    default_skeleton,
    load_lexicon,
    save_lexicon,
    validate_lexicon,
)
from .matcher import MarkerCounts, MatchEvent, count_markers, marker_list, match_events, tokenize
from .scorer import (
    UNDETERMINED,
    KindScore,
    MemberProfile,
    congruence,
    decide,
    indicator_scores,
    score_member,
    value_scores,
)
from .taxonomy import CharacteristicKind
from .trainer import (
    Candidate,
    ClassFrequencyTable,
    EvaluationReport,
    TrainerConfig,
    extract_candidates,
    holdout_validate,
    train,
    weigh_candidates,
)
from .verifier import (
    CONFIRMED,
    CONTRADICTED,
    UNDECLARED,
    UNVERIFIABLE,
    KindVerdict,
    Verdict,
    verify,
    verify_batch,
)

__version__ = "1.0.0"
