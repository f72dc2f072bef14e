from pathlib import Path

from pipeline import eval_stage, input_digest
from pipeline.stages import MODEL

from ._base import HemonCommand


class Command(HemonCommand):
    help = 'Evaluate a checkpoint on the test split held out by its training seed'

    records_run = True

    def add_command_arguments(self, parser):
        parser.add_argument('--model', type=Path, help='Checkpoint JSON (default: <out>/model.json)')
        parser.add_argument('--features', type=Path, help='Stimulus features CSV')
        parser.add_argument('--ratings', type=Path, help='Stimulus ratings CSV')
        parser.add_argument('--test-fraction', type=float, help='Override the recorded test fraction')

    def config_overrides(self, options):
        return {"stimuli_features": options.get("features"), "stimuli_ratings": options.get("ratings")}

    def run(self, config, options):
        model = self.artifact(config, MODEL, options.get("model"))
        features, ratings = self.stimuli_paths(config, options)
        path, result = eval_stage(model, features, ratings, config.out, options.get("test_fraction"))
        metric = "mae" if "mae" in result["metrics"] else "accuracy"
        self.record_training(
            variant=result["variant"],
            seed=result["seed"],
            metric=metric,
            test_value=result["metrics"][metric],
            checkpoint_path=str(model),
        )
        for name, score in sorted(result["metrics"].items()):
            self.stdout.write(f'📊 {name}: {score:.4f}')
        self.stdout.write(self.style.SUCCESS(f'✅ Evaluation on {result["n_test"]} stimuli written to {path}'))
        return input_digest([model, features, ratings])
