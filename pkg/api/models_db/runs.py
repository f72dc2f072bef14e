from django.db import models


class PipelineRun(models.Model):
    """One invocation of a recording command (pipeline, train, eval, ablate).

    This model is the canonical definition and is imported in api.models.
    """

    STATUS_CHOICES = (
        ("pending", "Pending"),
        ("success", "Success"),
        ("failed", "Failed"),
    )

    command = models.CharField(max_length=32)
    seed = models.PositiveBigIntegerField(default=0)
    out_dir = models.CharField(max_length=1024)
    # RunConfig as dumped by pydantic (JSON mode)
    config = models.JSONField(default=dict)
    status = models.CharField(max_length=16, choices=STATUS_CHOICES, default="pending")
    input_digest = models.CharField(max_length=64, blank=True, default="")
    stage = models.CharField(max_length=32, blank=True, default="")
    error = models.TextField(blank=True, default="")
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    def __str__(self) -> str:  # pragma: no cover - simple model string
        return f"PipelineRun({self.command}, seed={self.seed}, status={self.status})"


class TrainingRun(models.Model):
    """A trained (or evaluated) model variant belonging to a run."""

    run = models.ForeignKey(PipelineRun, on_delete=models.CASCADE, related_name="training_runs")
    variant = models.CharField(max_length=16)
    seed = models.PositiveBigIntegerField(default=0)
    metric = models.CharField(max_length=16, default="mae")
    test_value = models.FloatField(null=True, blank=True)
    train_report = models.JSONField(null=True, blank=True)
    checkpoint_path = models.CharField(max_length=1024, blank=True, default="")
    wall_time = models.FloatField(default=0.0)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["id"]

    def __str__(self) -> str:  # pragma: no cover - simple model string
        return f"TrainingRun({self.variant}, seed={self.seed}, {self.metric}={self.test_value})"
