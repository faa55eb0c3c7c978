from .authors import BREADTH_CATEGORIES, AuthorProfile, breadth_category, build_author_profiles
from .labeling import label_corpus
from .lexicon import ClueLexicon, LexiconError, build_lexicon, classify_preprint, expand_variants, load_lexicon, normalize
from .tiers import assign_author_influence_tiers, assign_impact_tiers, tier_sizes

__all__ = [
    "AuthorProfile",
    "BREADTH_CATEGORIES",
    "ClueLexicon",
    "LexiconError",
    "assign_author_influence_tiers",
    "assign_impact_tiers",
    "breadth_category",
    "build_author_profiles",
    "build_lexicon",
    "classify_preprint",
    "expand_variants",
    "label_corpus",
    "load_lexicon",
    "normalize",
    "tier_sizes",
]
