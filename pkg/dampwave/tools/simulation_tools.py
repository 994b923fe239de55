"""
MCP tool handlers for simulation runs and convergence sweeps
"""
import asyncio

from mcp.types import TextContent

from dampwave.errors import DampwaveError
from dampwave.models.params import CommandParams
from dampwave.services import simulation_service
from dampwave.utils.config_file import load_config


def _status(success: bool) -> str:
    return "✅ PASS" if success else "❌ FAIL"


def format_simulate(result: dict) -> str:
    summary = result['summary']
    text = f"🌊 Simulation {_status(result['success'])}\n\n"
    text += f"Config: {summary.config_hash[:12]}\n"
    text += f"Steps: {summary.steps} (T = {summary.final_time:g})\n"
    text += f"E(0) = {summary.initial_energy:.6e}  E(T) = {summary.final_energy:.6e}\n"
    text += f"E1(T) = {summary.final_higher_energy:.6e}\n"
    text += f"Identity residual: {summary.identity_residual:.3e}\n"
    text += f"Energy monotone: {'yes' if summary.energy_monotone else 'no'}\n"
    text += f"L5L10 = {summary.strichartz_l5_l10:.6e}  L4L12 = {summary.strichartz_l4_l12:.6e}\n"
    if summary.decay_fit:
        text += f"Decay exponent: {summary.decay_fit['exponent']:.4f}\n"
    if summary.nakao:
        text += f"Nakao C1 = {summary.nakao['c1']:.4e}, envelope margin {summary.nakao['envelope_margin']:.3e}\n"
    if summary.band_limited is not None:
        text += f"Band limited: {'yes' if summary.band_limited else 'no'}\n"
    if summary.violations:
        text += f"Violations: {', '.join(summary.violations)}\n"
    text += f"\n📁 {result['trace_path']}\n📁 {result['summary_path']}"
    return text


def format_sweep(result: dict) -> str:
    text = f"🔬 Convergence sweep over N = {', '.join(str(row['modes']) for row in result['levels'])}\n\n"
    for row in result['levels']:
        flag = "✅" if row['resolved'] else "⚠️ unresolved"
        text += f"N={row['modes']}: E(T)={row['final_energy']:.6e}  L5L10={row['strichartz_l5_l10']:.6e}  {flag}\n"
    if result['differences']:
        text += "\nDifferences at t = T:\n"
        for row in result['differences']:
            text += (f"  N={row['coarse']} vs {row['fine']}: "
                     f"{row['energy_norm_difference']:.3e} (L5L10 change {row['strichartz_relative_change']:.2%})\n")
    text += f"\n📁 {result['output_dir']}"
    return text


async def handle_simulate(params: CommandParams) -> list[TextContent]:
    """Run one simulation"""
    try:
        config = load_config(params.config_path, params.seed, params.out_dir)
        result = await asyncio.to_thread(simulation_service.run_simulate, config)
        return [TextContent(type="text", text=format_simulate(result))]

    except DampwaveError as e:
        return [TextContent(
            type="text",
            text=f"❌ Simulation failed ({e.reason.value}): {str(e)}"
        )]


async def handle_sweep_m(params: CommandParams) -> list[TextContent]:
    """Run a convergence sweep over truncation levels"""
    try:
        config = load_config(params.config_path, params.seed, params.out_dir)
        result = await asyncio.to_thread(simulation_service.run_convergence_sweep, config)
        return [TextContent(type="text", text=format_sweep(result))]

    except DampwaveError as e:
        return [TextContent(
            type="text",
            text=f"❌ Sweep failed ({e.reason.value}): {str(e)}"
        )]
