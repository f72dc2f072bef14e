from django.contrib import admin
from .models import PipelineRun, TrainingRun


class TrainingRunInline(admin.TabularInline):
    model = TrainingRun
    extra = 0
    fields = ("variant", "seed", "metric", "test_value", "checkpoint_path", "wall_time")
    readonly_fields = fields


@admin.register(PipelineRun)
class PipelineRunAdmin(admin.ModelAdmin):
    list_display = ("id", "command", "seed", "status", "stage", "out_dir", "created_at")
    list_filter = ("command", "status")
    search_fields = ("out_dir", "input_digest")
    readonly_fields = ("created_at", "updated_at")
    inlines = [TrainingRunInline]


@admin.register(TrainingRun)
class TrainingRunAdmin(admin.ModelAdmin):
    list_display = ("id", "run", "variant", "seed", "metric", "test_value", "created_at")
    list_filter = ("variant", "metric")
    readonly_fields = ("created_at",)
