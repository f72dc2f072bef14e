from pipeline import build_report

from ._base import HemonCommand


class Command(HemonCommand):
    help = 'Summarize run artifacts: area sizes, system compositions and the test metric table'

    def add_command_arguments(self, parser):
        parser.add_argument('--plot', action='store_true', default=None, help='Also write report.png')

    def config_overrides(self, options):
        return {"plot": options.get("plot")}

    def run(self, config, options):
        text, written = build_report(config.out, plot=config.plot)
        self.stdout.write(text)
        for path in written:
            self.stdout.write(self.style.SUCCESS(f'📝 Wrote {path}'))
