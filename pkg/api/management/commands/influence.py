from pathlib import Path

from influence.oracles import BRUTEFORCE_MAX_NODES
from pipeline import influence_stage, input_digest
from pipeline.stages import TREE

from ._base import HemonCommand


class Command(HemonCommand):
    help = 'Audit node influence (closed form vs random-walk oracle) and path information on a tree'

    def add_command_arguments(self, parser):
        parser.add_argument('--tree', type=Path, help='Tree edge list (default: <out>/tree.txt)')
        parser.add_argument(
            '--max-nodes',
            type=int,
            default=BRUTEFORCE_MAX_NODES,
            help='Largest tree for the exhaustive path search',
        )

    def run(self, config, options):
        tree = self.artifact(config, TREE, options.get("tree"))
        audit, info = influence_stage(tree, config.out, options["max_nodes"])
        self.stdout.write(self.style.SUCCESS(f'✅ Influence audit written to {audit}'))
        self.stdout.write(f'📈 Path information written to {info}')
        return input_digest([tree])
