from pathlib import Path

from pipeline import VARIANTS, input_digest, run_ablation
from pipeline.stages import HIERARCHY, TREE

from ._base import HemonCommand


class Command(HemonCommand):
    help = 'Compare HEmoN, HEmoN-EA1, HEmoN-DFT and the FNN baseline over repeated seeds'

    records_run = True

    def add_command_arguments(self, parser):
        parser.add_argument('--hierarchy', type=Path, help='Trunk hierarchy JSON (default: <out>/hierarchy.json)')
        parser.add_argument('--tree', type=Path, help='Tree edge list (default: <out>/tree.txt)')
        parser.add_argument('--features', type=Path, help='Stimulus features CSV')
        parser.add_argument('--ratings', type=Path, help='Stimulus ratings CSV')
        parser.add_argument('--seeds', nargs='+', type=int, help='Seeds to repeat over (default: 0..9)')
        parser.add_argument('--variants', nargs='+', choices=VARIANTS, help='Variants to compare (default: all)')
        parser.add_argument('--epochs', type=int, help='Maximum number of epochs')

    def config_overrides(self, options):
        return {
            "ablation_seeds": options.get("seeds"),
            "ablation_variants": options.get("variants"),
            "stimuli_features": options.get("features"),
            "stimuli_ratings": options.get("ratings"),
            "model": {"max_epochs": options.get("epochs")},
        }

    def run(self, config, options):
        hierarchy = self.artifact(config, HIERARCHY, options.get("hierarchy"))
        tree = self.artifact(config, TREE, options.get("tree"))
        features, ratings = self.stimuli_paths(config, options)
        self.stdout.write(
            f'🔁 Ablation over {len(config.ablation_seeds)} seed(s) and {len(config.ablation_variants)} variant(s)...'
        )
        doc = run_ablation(hierarchy, tree, features, ratings, config.out, config)
        for entry in doc.variants:
            for seed, value in zip(entry.seeds, entry.values):
                self.record_training(variant=entry.variant, seed=seed, metric=doc.metric, test_value=value)
            self.stdout.write(
                f'📊 {entry.variant:<6} {doc.metric} {entry.mean:.4f} ± {entry.ci95:.4f} (std {entry.std:.4f})'
            )
        for pair, count in sorted(doc.wins.items()):
            self.stdout.write(f'   • {pair}: {count}/{len(config.ablation_seeds)} seeds')
        self.stdout.write(self.style.SUCCESS(f'✅ Ablation results written to {config.out}'))
        return input_digest([hierarchy, tree, features, ratings])
