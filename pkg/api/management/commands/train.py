from pathlib import Path

from pipeline import VARIANTS, input_digest, train_stage
from pipeline.stages import HIERARCHY, TREE

from ._base import HemonCommand


class Command(HemonCommand):
    help = 'Train HEmoN (or an ablation variant / the FNN baseline) on stimulus features'

    records_run = True

    def add_command_arguments(self, parser):
        parser.add_argument('--hierarchy', type=Path, help='Trunk hierarchy JSON (default: <out>/hierarchy.json)')
        parser.add_argument('--tree', type=Path, help='Tree edge list (default: <out>/tree.txt)')
        parser.add_argument('--features', type=Path, help='Stimulus features CSV (S rows x N columns)')
        parser.add_argument('--ratings', type=Path, help='Stimulus ratings CSV (S rows x C columns)')
        parser.add_argument('--variant', choices=VARIANTS, help='Model variant (default: hemon)')
        parser.add_argument('--epochs', type=int, help='Maximum number of epochs')

    def config_overrides(self, options):
        return {
            "variant": options.get("variant"),
            "stimuli_features": options.get("features"),
            "stimuli_ratings": options.get("ratings"),
            "model": {"max_epochs": options.get("epochs")},
        }

    def run(self, config, options):
        hierarchy = self.artifact(config, HIERARCHY, options.get("hierarchy"))
        tree = self.artifact(config, TREE, options.get("tree"))
        features, ratings = self.stimuli_paths(config, options)
        self.stdout.write(f'🏋️  Training {config.variant} with seed {config.seed}...')
        artifacts, report = train_stage(hierarchy, tree, features, ratings, config.out, config)
        self.record_training(
            variant=config.variant,
            seed=config.seed,
            metric="mae" if config.model.head == "regression" else "accuracy",
            train_report=report.to_dict(),
            checkpoint_path=str(artifacts.model),
            wall_time=report.wall_time,
        )
        self.stdout.write(self.style.SUCCESS(
            f'✅ Trained for {report.epochs} epochs ({report.stop_reason}); '
            f'best validation {report.best_val:.4f} at epoch {report.best_epoch}'
        ))
        self.stdout.write(f'💾 Checkpoint: {artifacts.model}')
        return input_digest([hierarchy, tree, features, ratings])
