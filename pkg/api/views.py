from pathlib import Path

from django.http import JsonResponse, HttpRequest
from django.shortcuts import get_object_or_404

from pipeline.stages import HIERARCHY
from trunks import HierarchyError, export_hierarchy, read_hierarchy

from .models import PipelineRun, TrainingRun


_RUN_FIELDS = ("id", "command", "seed", "status", "stage", "out_dir", "input_digest", "created_at")
_TRAINING_FIELDS = ("id", "run_id", "variant", "seed", "metric", "test_value", "checkpoint_path", "wall_time", "created_at")


def list_runs_view(request: HttpRequest):
    if request.method != "GET":
        return JsonResponse({"error": "Method not allowed"}, status=405)
    qs = PipelineRun.objects.order_by("-created_at", "-id")
    command = request.GET.get("command")
    if command:
        qs = qs.filter(command=command)
    return JsonResponse({"results": list(qs.values(*_RUN_FIELDS))})


def run_detail_view(request: HttpRequest, pk: int):
    if request.method != "GET":
        return JsonResponse({"error": "Method not allowed"}, status=405)
    run = get_object_or_404(PipelineRun, pk=pk)
    data = {field: getattr(run, field) for field in _RUN_FIELDS}
    data["config"] = run.config
    data["error"] = run.error
    data["training_runs"] = list(run.training_runs.values(*_TRAINING_FIELDS))
    return JsonResponse(data)


def run_hierarchy_view(request: HttpRequest, pk: int):
    """The trunk hierarchy document a run wrote, re-validated on the way out."""
    if request.method != "GET":
        return JsonResponse({"error": "Method not allowed"}, status=405)
    run = get_object_or_404(PipelineRun, pk=pk)
    path = Path(run.out_dir) / HIERARCHY
    try:
        hierarchy = read_hierarchy(path)
    except FileNotFoundError:
        return JsonResponse({"error": f"Run {run.id} has no hierarchy artifact."}, status=404)
    except HierarchyError as exc:
        return JsonResponse({"error": str(exc)}, status=500)
    return JsonResponse({"run_id": run.id, "hierarchy": export_hierarchy(hierarchy)})


def list_training_runs_view(request: HttpRequest):
    if request.method != "GET":
        return JsonResponse({"error": "Method not allowed"}, status=405)
    qs = TrainingRun.objects.order_by("-created_at", "-id")
    variant = request.GET.get("variant")
    if variant:
        qs = qs.filter(variant=variant)
    return JsonResponse({"results": list(qs.values(*_TRAINING_FIELDS))})
