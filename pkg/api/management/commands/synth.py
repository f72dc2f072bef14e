from pathlib import Path

from pipeline import synth_generate, write_synthetic
from pipeline.runner import SYNTH_DIR

from ._base import HemonCommand


class Command(HemonCommand):
    help = 'Generate planted-tree synthetic time series, ratings, atlas and stimuli'

    def add_command_arguments(self, parser):
        parser.add_argument('--nodes', type=int, help='Planted tree size N (>= 2)')
        parser.add_argument('--noise', type=float, help='Observation noise sigma (>= 0)')
        parser.add_argument('--time-points', type=int, help='Number of TRs (>= 3)')
        parser.add_argument('--stimuli', type=int, help='Number of stimuli')
        parser.add_argument('--categories', type=int, help='Rating dimension C (>= 1)')

    def config_overrides(self, options):
        synth = {
            "node_count": options.get("nodes"),
            "noise": options.get("noise"),
            "time_points": options.get("time_points"),
            "stimuli": options.get("stimuli"),
            "categories": options.get("categories"),
        }
        return {"synth": synth}

    def run(self, config, options):
        dataset = synth_generate(config.synth)
        target = Path(config.out) / SYNTH_DIR
        paths = write_synthetic(dataset, target)
        self.stdout.write(self.style.SUCCESS(
            f'✅ Synthetic data for {config.synth.node_count} nodes '
            f'({dataset.hierarchy.level_count} planted levels) written to {target}'
        ))
        for name, path in paths.items():
            self.stdout.write(f'   • {name}: {path.name}')
