from django.urls import path

from .views import (
    list_runs_view,
    run_detail_view,
    run_hierarchy_view,
    list_training_runs_view,
)

urlpatterns = [
    path('runs/', list_runs_view, name='runs_list'),
    path('runs/<int:pk>/', run_detail_view, name='run_detail'),
    path('runs/<int:pk>/hierarchy/', run_hierarchy_view, name='run_hierarchy'),
    path('training-runs/', list_training_runs_view, name='training_runs_list'),
]
