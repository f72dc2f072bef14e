from pathlib import Path

from pipeline import extract_tree_stage, input_digest
from pipeline.stages import NETWORK

from ._base import HemonCommand


class Command(HemonCommand):
    help = 'Extract the maximum spanning brain tree from a dense network'

    def add_command_arguments(self, parser):
        parser.add_argument('--network', type=Path, help='Network edge list (default: <out>/network.txt)')
        parser.add_argument('--abs-weights', action='store_true', default=None, help='Rank edges by |weight|')

    def config_overrides(self, options):
        return {"abs_weights": options.get("abs_weights")}

    def run(self, config, options):
        network = self.artifact(config, NETWORK, options.get("network"))
        path = extract_tree_stage(network, config.out, abs_weights=config.abs_weights)
        self.stdout.write(self.style.SUCCESS(f'🌳 Brain tree written to {path}'))
        return input_digest([network])
