"""
MCP tool handlers for the multiplier suite, decay studies, Nakao
re-analysis and the oracle check
"""
import asyncio

from mcp.types import TextContent

from dampwave.errors import DampwaveError
from dampwave.models.params import CommandParams
from dampwave.services import decay_service, multiplier_service, oracle_service
from dampwave.utils.config_file import load_config


def _mark(ok: bool) -> str:
    return "✅" if ok else "❌"


def _num(value) -> str:
    return "n/a" if value is None else f"{value:.4g}"


def format_multiplier_test(result: dict) -> str:
    text = f"🎛️ Multiplier suite on N={result['domain']['modes']} (seed {result['seed']})\n\n"
    for name, ok in result['properties'].items():
        text += f"{_mark(ok)} {name}\n"
    text += "\n"
    for row in result['specs']:
        text += f"{row['kind']:>6} m={row['level']:g}: ‖S‖₂={row['l2_contraction']:.6f}"
        text += f"  L10 ratio={row['lp_ratios']['10']:.4f}"
        if 'regularization' in row:
            text += f"  reg s=1: {row['regularization']['1']:.4f}  s=2: {row['regularization']['2']:.4f}"
        text += "\n"
    return text


def format_decay_study(result: dict) -> str:
    text = f"📉 Decay study (fit window {result['fit_window'][0]:g}..{result['fit_window'][1]:g})\n\n"
    for row in result['rows']:
        fit = row['decay_fit']
        nakao = row['nakao']
        text += f"{_mark(row['lower_bound_holds'])} {row['model']:>7} E0={row['target_energy']:g}: "
        text += f"E(T)={row['final_energy']:.4e}  α={_num(fit['exponent'] if fit else None)}  "
        text += f"μ={_num(row['sandwich_mu'])}  C1={_num(nakao['c1'] if nakao else None)}\n"
    if result['violations']:
        first = result['violations'][0]
        text += f"\n❌ Lower bound violated: {first['model']} E0={first['target_energy']:g} at t={first['time']:g}\n"
    return text


def format_nakao(result: dict) -> str:
    nakao = result['nakao']
    text = f"{_mark(result['success'])} Nakao analysis of {result['trace']}\n\n"
    text += f"Windows: {nakao['windows']}\n"
    text += f"C1 = {nakao['c1']:.6e}\n"
    text += f"Envelope margin: {nakao['envelope_margin']:.3e}\n"
    text += f"max n·Ē_n = {nakao['envelope_decay_constant']:.6e}\n"
    if result['decay_fit']:
        text += f"Decay exponent: {result['decay_fit']['exponent']:.4f}\n"
    return text


def format_oracle_check(result: dict) -> str:
    text = f"✅ Oracle check: deviation {result['deviation']:.3e} <= {result['threshold']:.1e}\n"
    text += f"Modes: {result['modes']}, dt = {result['dt']:g}, T = {result['duration']:g}\n"
    return text


async def handle_multiplier_test(params: CommandParams) -> list[TextContent]:
    """Run the multiplier property suite"""
    try:
        config = load_config(params.config_path, params.seed, params.out_dir)
        result = await asyncio.to_thread(multiplier_service.run_multiplier_test, config)
        return [TextContent(type="text", text=format_multiplier_test(result))]

    except DampwaveError as e:
        return [TextContent(type="text", text=f"❌ Multiplier suite failed ({e.reason.value}): {str(e)}")]


async def handle_decay_study(params: CommandParams) -> list[TextContent]:
    """Compare decay of the oscillator, linear and quintic runs"""
    try:
        config = load_config(params.config_path, params.seed, params.out_dir)
        result = await asyncio.to_thread(decay_service.run_decay_study, config)
        return [TextContent(type="text", text=format_decay_study(result))]

    except DampwaveError as e:
        return [TextContent(type="text", text=f"❌ Decay study failed ({e.reason.value}): {str(e)}")]


async def handle_nakao(params: CommandParams) -> list[TextContent]:
    """Re-analyze a stored trace"""
    try:
        config = load_config(params.config_path, params.seed, params.out_dir)
        result = await asyncio.to_thread(decay_service.run_nakao, config)
        return [TextContent(type="text", text=format_nakao(result))]

    except DampwaveError as e:
        return [TextContent(type="text", text=f"❌ Nakao analysis failed ({e.reason.value}): {str(e)}")]


async def handle_oracle_check(params: CommandParams) -> list[TextContent]:
    """Compare against the high-precision reference"""
    try:
        config = load_config(params.config_path, params.seed, params.out_dir)
        result = await asyncio.to_thread(oracle_service.run_oracle_check, config)
        return [TextContent(type="text", text=format_oracle_check(result))]

    except DampwaveError as e:
        return [TextContent(type="text", text=f"❌ Oracle check failed ({e.reason.value}): {str(e)}")]
