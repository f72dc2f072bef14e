from pipeline import VARIANTS, run_pipeline

from ._base import HemonCommand


class Command(HemonCommand):
    help = 'Run build_network, extract_tree, decompose, train and eval end to end (synthetic data if no inputs)'

    records_run = True

    def add_command_arguments(self, parser):
        parser.add_argument('--variant', choices=VARIANTS, help='Model variant (default: hemon)')
        parser.add_argument('--epochs', type=int, help='Maximum number of epochs')

    def config_overrides(self, options):
        return {"variant": options.get("variant"), "model": {"max_epochs": options.get("epochs")}}

    def run(self, config, options):
        source = "synthetic data" if config.uses_synthetic_data else f"{len(config.timeseries)} subject(s)"
        self.stdout.write(f'🚀 Running the pipeline on {source} (seed {config.seed})...')
        result = run_pipeline(config)
        metric = "mae" if "mae" in result.metrics else "accuracy"
        report = result.train_report or {}
        self.record_training(
            variant=config.variant,
            seed=config.seed,
            metric=metric,
            test_value=result.metrics.get(metric),
            train_report=report,
            checkpoint_path=str(result.artifacts["model"]),
        )
        for name, path in sorted(result.artifacts.items()):
            self.stdout.write(f'   • {name}: {path}')
        self.stdout.write(self.style.SUCCESS(
            f'✅ Pipeline finished: test {metric} {result.metrics.get(metric, float("nan")):.4f}'
        ))
        return result.digest
