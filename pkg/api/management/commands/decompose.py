from pathlib import Path

from pipeline import decompose_stage, input_digest
from pipeline.stages import TREE

from ._base import HemonCommand


class Command(HemonCommand):
    help = 'Decompose a brain tree into hierarchical trunks and emotional areas'

    def add_command_arguments(self, parser):
        parser.add_argument('--tree', type=Path, help='Tree edge list (default: <out>/tree.txt)')
        parser.add_argument('--atlas', type=Path, help='ROI atlas JSON for system composition')

    def config_overrides(self, options):
        return {"atlas": options.get("atlas")}

    def run(self, config, options):
        tree = self.artifact(config, TREE, options.get("tree"))
        hierarchy, composition = decompose_stage(tree, config.out, config.atlas)
        self.stdout.write(self.style.SUCCESS(f'✅ Hierarchy written to {hierarchy}'))
        if composition is not None:
            self.stdout.write(f'📊 System composition written to {composition}')
        return input_digest([tree, config.atlas])
