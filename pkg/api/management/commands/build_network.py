from pathlib import Path

from django.core.management.base import CommandError

from pipeline import build_network_stage, input_digest

from ._base import EXIT_USAGE, HemonCommand


class Command(HemonCommand):
    help = 'Correlate ROI time series and write the dense functional network'

    def add_command_arguments(self, parser):
        parser.add_argument('--timeseries', nargs='+', type=Path, help='One ROI time-series CSV per subject')
        parser.add_argument('--ratings', type=Path, help='Per-TR emotion ratings CSV (for epoch selection)')
        parser.add_argument('--category', help='Keep only TRs rated highly for this category (name or index)')
        parser.add_argument('--quantile', type=float, help='Rating quantile for epoch selection (default 0.75)')
        parser.add_argument('--aggregate', help='"mean" or "subject:<k>"')
        parser.add_argument('--fisher-z', action='store_true', default=None, help='Average in Fisher-z space')

    def config_overrides(self, options):
        return {
            "timeseries": options.get("timeseries"),
            "ratings": options.get("ratings"),
            "category": options.get("category"),
            "quantile": options.get("quantile"),
            "aggregate": options.get("aggregate"),
            "fisher_z": options.get("fisher_z"),
        }

    def run(self, config, options):
        if not config.timeseries:
            raise CommandError("build_network needs --timeseries (or timeseries in the config file)", returncode=EXIT_USAGE)
        self.stdout.write(f'🧠 Correlating {len(config.timeseries)} subject(s)...')
        path = build_network_stage(
            config.timeseries,
            config.out,
            ratings=config.ratings,
            category=config.category,
            quantile=config.quantile,
            aggregate_mode=config.aggregate,
            fisher_z=config.fisher_z,
        )
        self.stdout.write(self.style.SUCCESS(f'✅ Network written to {path}'))
        return input_digest([*config.timeseries, config.ratings])
