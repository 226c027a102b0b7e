from qwalk_equivalence.pipeline import Pipeline
