from .models_db.runs import PipelineRun, TrainingRun  # canonical models location

__all__ = ["PipelineRun", "TrainingRun"]
