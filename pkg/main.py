"""
HyperLab - Main Application Entry Point
"""
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import click

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.config import config
from src.errors import ConfigError, ConvergenceError, HyperlabError, InvariantBreach, PreconditionError
from src.experiments import DEFAULTS, EXPERIMENTS, MODES, ExperimentConfig, reproduce_all, run_experiment
from src.utils.logger import setup_logging

# Setup logging
logger = setup_logging()


def _float_list(ctx, param, value: Optional[str]) -> Optional[List[float]]:
    if value is None:
        return None
    try:
        return [float(item) for item in value.split(',') if item.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {value!r}")


def _int_list(ctx, param, value: Optional[str]) -> Optional[List[int]]:
    """Accepts "1,2,5" or a range "1-12" """
    if value is None:
        return None
    try:
        if '-' in value and ',' not in value:
            lo, hi = (int(v) for v in value.split('-', 1))
            return list(range(lo, hi + 1))
        return [int(item) for item in value.split(',') if item.strip()]
    except ValueError:
        raise click.BadParameter(f"expected integers like 1,2,3 or 1-12, got {value!r}")


def _fail(code: int, message: str):
    click.echo(f"Error: {message}", err=True)
    sys.exit(code)


def _execute(kind: str, params: Dict[str, Any], seed: Optional[int], out_dir: Optional[str],
             system: Optional[Dict[str, Any]] = None, cfg: Optional[ExperimentConfig] = None):
    """Validate, run, report and exit with the experiment's code"""
    try:
        if cfg is None:
            cfg = ExperimentConfig(kind, {k: v for k, v in (system or {}).items() if v is not None},
                                   {k: v for k, v in params.items() if v is not None}, seed or 0)
        elif seed is not None:
            cfg = cfg.with_overrides(seed=seed)
        result = run_experiment(cfg, out_dir)
    except (ConfigError, PreconditionError) as exc:
        _fail(2, str(exc))
    except (InvariantBreach, ConvergenceError) as exc:
        logger.exception(f"{type(exc).__name__} during {kind}")
        _fail(1, f"{type(exc).__name__}: {exc}")
    except HyperlabError as exc:
        _fail(1, str(exc))

    click.echo(f"{result.name}: {result.outcome.value}")
    for path in result.files:
        click.echo(f"  {path}")
    sys.exit(result.exit_code)


def circle_options(func):
    """Base circle map and shared run options"""
    func = click.option('--out-dir', type=click.Path(file_okay=False), default=None,
                        help='Report directory')(func)
    func = click.option('--seed', type=int, default=None, help='Random seed')(func)
    func = click.option('--orientation', type=click.Choice(['preserving', 'reversing']), default=None,
                        help='Orientation of the circle map')(func)
    func = click.option('--amplitude', type=float, default=None, help='Amplitude A, 0 < 2*pi*k*A < 1')(func)
    func = click.option('--k', 'pairs', type=int, default=None, help='Attractor-repeller pairs')(func)
    return func


def _system(pairs, amplitude, orientation) -> Dict[str, Any]:
    return {'k': pairs, 'amplitude': amplitude, 'orientation': orientation}


def _list_experiments(ctx, param, value):
    if not value or ctx.resilient_parsing:
        return
    for kind, description in EXPERIMENTS.items():
        click.echo(f"{kind:<11} {description}")
        for name, choices in MODES.get(kind, {}).items():
            click.echo(f"{'':<11}   {name}: {', '.join(choices)}")
    ctx.exit(0)


@click.group()
@click.option('--list-experiments', is_flag=True, expose_value=False, is_eager=True, callback=_list_experiments,
              help='List experiment kinds and exit')
@click.option('--log-level', default=None, help='Override HYPERLAB_LOG_LEVEL')
def cli(log_level):
    """HyperLab - Hyperspace dynamics of Morse-Smale systems"""
    if log_level:
        setup_logging(log_level)


@cli.command()
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False), required=True,
              help='Experiment config (JSON)')
@click.option('--out-dir', type=click.Path(file_okay=False), default=None, help='Report directory')
@click.option('--seed', type=int, default=None, help='Override the config seed')
def run(config_path, out_dir, seed):
    """Run an experiment from a JSON config"""
    try:
        cfg = ExperimentConfig.load(config_path)
    except ConfigError as exc:
        _fail(2, str(exc))
    _execute(cfg.kind, {}, seed, out_dir, cfg=cfg)


@cli.command()
@circle_options
@click.option('--x', type=float, default=None, help='Base point off Fix(f)')
@click.option('--stride', type=int, default=None, help='Period of the orbit closure')
@click.option('--trunc', type=int, default=None, help='Strides kept on each side')
@click.option('--window', type=int, default=None, help='Non-recurrence window')
@click.option('--wandering-samples', type=int, default=None, help='Arcs given wandering certificates')
def recurrence(pairs, amplitude, orientation, seed, out_dir, x, stride, trunc, window, wandering_samples):
    """Periodic points, homoclinic witness and fixed continua"""
    _execute('recurrence', {'x': x, 'stride': stride, 'trunc': trunc, 'window': window,
                            'wandering_samples': wandering_samples},
             seed, out_dir, _system(pairs, amplitude, orientation))


@cli.command()
@circle_options
@click.option('--mode', type=click.Choice(MODES['shadow']['mode']), default='falsify-cf', help='Shadowing check')
@click.option('--epsilon', type=float, default=None, help='Shadowing accuracy')
@click.option('--delta', type=float, default=None, help='Pseudo-orbit gap')
@click.option('--window', type=int, default=None, help='Pseudo-orbit window N')
@click.option('--grid', type=float, default=None, help='Arc endpoint grid spacing')
@click.option('--strands', type=int, default=None, help='Strands per finite-set pseudo-orbit')
@click.option('--trials', type=int, default=None, help='Random pseudo-orbits for shadow-2f')
@click.option('--per-candidate', is_flag=True, help='Write the per-candidate failure table')
def shadow(pairs, amplitude, orientation, seed, out_dir, mode, epsilon, delta, window, grid, strands, trials,
           per_candidate):
    """Falsify C(f) shadowing or shadow 2^f pseudo-orbits"""
    _execute('shadow', {'mode': mode, 'epsilon': epsilon, 'delta': delta, 'window': window, 'grid': grid,
                        'strands': strands, 'trials': trials, 'per_candidate': per_candidate},
             seed, out_dir, _system(pairs, amplitude, orientation))


@cli.command()
@circle_options
@click.option('--system', 'entropy_system', type=click.Choice(MODES['entropy']['system']), default='arc',
              help='System whose entropy is estimated')
@click.option('--eps-schedule', callback=_float_list, default=None, help='Decreasing epsilons, e.g. 0.1,0.05')
@click.option('--n-schedule', callback=_int_list, default=None, help='Increasing n, e.g. 1-12')
@click.option('--budget', type=int, default=None, help='Cap on d_n evaluations')
@click.option('--samples', type=int, default=None, help='Sample size for greedy counts')
@click.option('--r', 'family_r', type=int, default=None, help='Strands of the exact separated family')
def entropy(pairs, amplitude, orientation, seed, out_dir, entropy_system, eps_schedule, n_schedule, budget,
            samples, family_r):
    """Separated-set entropy tables"""
    _execute('entropy', {'system': entropy_system, 'eps_schedule': eps_schedule, 'n_schedule': n_schedule,
                         'budget': budget, 'samples': samples, 'r': family_r},
             seed, out_dir, _system(pairs, amplitude, orientation))


@cli.command()
@circle_options
@click.option('--construction', type=click.Choice(MODES['coding']['construction']), default='phi2f',
              help='Coding to check')
@click.option('--r', 'symbols', type=int, default=None, help='Number of strands or symbols')
@click.option('--window', type=int, default=None, help='Index window')
@click.option('--samples', type=int, default=None, help='Random inputs checked')
def coding(pairs, amplitude, orientation, seed, out_dir, construction, symbols, window, samples):
    """Bit-exact coding identities"""
    _execute('coding', {'construction': construction, 'r': symbols, 'window': window, 'samples': samples},
             seed, out_dir, _system(pairs, amplitude, orientation))


@cli.command()
@click.option('--mode', type=click.Choice(MODES['dendrite']['mode']), default='csigma', help='Dendrite check')
@click.option('--k', type=int, default=None, help='Graduations on the base leg')
@click.option('--n', type=int, default=None, help='Word length')
@click.option('--delta', type=float, default=None, help='Separation to certify')
@click.option('--pairs', is_flag=True, help='Write the pairwise distance table')
@click.option('--r', 'families', type=int, default=None, help='Leg families of full cones')
@click.option('--window', type=int, default=None, help='Full-cone window')
@click.option('--samples', type=int, default=None, help='Random codes or points checked')
@click.option('--seed', type=int, default=None, help='Random seed')
@click.option('--out-dir', type=click.Path(file_okay=False), default=None, help='Report directory')
def dendrite(mode, k, n, delta, pairs, families, window, samples, seed, out_dir):
    """Stub trees, full cones and the comb-dendrite map"""
    _execute('dendrite', {'mode': mode, 'k': k, 'n': n, 'delta': delta, 'pairs': pairs, 'r': families,
                          'window': window, 'samples': samples},
             seed, out_dir)


@cli.command()
@click.option('--mode', type=click.Choice(MODES['sphere']['mode']), default='periodic', help='Sphere construction')
@click.option('--period', type=int, default=None, help='Period N of the periodic continuum')
@click.option('--x', callback=_float_list, default=None, help='Base point as re,im')
@click.option('--window', type=int, default=None, help='Iterate window')
@click.option('--eta', type=float, default=None, help='Chordal discretization resolution')
@click.option('--epsilon', type=float, default=None, help='Shadowing accuracy (nonshadowing)')
@click.option('--delta', type=float, default=None, help='Pseudo-orbit gap (nonshadowing)')
@click.option('--per-family', type=int, default=None, help='Candidates per family (nonshadowing)')
@click.option('--mesh', type=int, default=None, help='Mesh points (conjugacy)')
@click.option('--per-candidate', is_flag=True, help='Write the per-candidate table')
@click.option('--seed', type=int, default=None, help='Random seed')
@click.option('--out-dir', type=click.Path(file_okay=False), default=None, help='Report directory')
def sphere(mode, period, x, window, eta, epsilon, delta, per_family, mesh, per_candidate, seed, out_dir):
    """North-South continua on the sphere"""
    if x is not None and len(x) != 2:
        _fail(2, f"--x takes two numbers re,im, got {x}")
    _execute('sphere', {'mode': mode, 'period': period, 'x': x, 'window': window, 'eta': eta, 'epsilon': epsilon,
                        'delta': delta, 'per_family': per_family, 'mesh': mesh, 'per_candidate': per_candidate},
             seed, out_dir)


@cli.command('reproduce-all')
@click.option('--out-dir', type=click.Path(file_okay=False), default=None, help='Report directory')
@click.option('--seed', type=int, default=0, help='Pinned seed')
@click.option('--only', type=int, multiple=True, help='Run only these criterion numbers')
def reproduce_all_command(out_dir, seed, only):
    """Run the acceptance suite and write summary.csv / summary.json"""
    summary = reproduce_all(out_dir, seed, list(only) or None)

    click.echo("\n" + "=" * 50)
    for row in summary['criteria']:
        status = 'PASS' if row['passed'] else 'FAIL'
        click.echo(f"[{status}] {row['criterion']}. {row['claim']}")
    click.echo("=" * 50)
    click.echo(f"Reports in {Path(out_dir or config.OUTPUT_DIR)}")
    sys.exit(0 if summary['all_passed'] else 1)


@cli.command()
@click.argument('kind', type=click.Choice(sorted(EXPERIMENTS)))
def defaults(kind):
    """Print the default parameters of an experiment"""
    for name, value in DEFAULTS[kind].items():
        click.echo(f"{name} = {value}")


if __name__ == '__main__':
    cli()
