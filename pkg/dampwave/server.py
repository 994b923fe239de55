#!/usr/bin/env python3
"""
dampwave MCP Server
Damped critical wave experiments over the Model Context Protocol

This is the server coordinator that registers and routes MCP tools.
Experiment logic is in services/, tool handlers in tools/.
"""

from typing import Any
from mcp.server import Server
from mcp.types import Tool, TextContent

from dampwave.logger import run_logger
from dampwave.models.params import CommandParams
from dampwave.tools.simulation_tools import handle_simulate, handle_sweep_m
from dampwave.tools.analysis_tools import (
    handle_decay_study,
    handle_multiplier_test,
    handle_nakao,
    handle_oracle_check
)

# Initialize MCP server
app = Server("dampwave")

COMMAND_SCHEMA = {
    "type": "object",
    "properties": {
        "config_path": {
            "type": "string",
            "description": "Path to a key = value experiment config"
        },
        "out_dir": {
            "type": "string",
            "description": "Output directory (overrides run.output_dir)"
        },
        "seed": {
            "type": "integer",
            "description": "Seed (overrides run.seed)"
        }
    },
    "required": ["config_path"]
}

HANDLERS = {
    "simulate": handle_simulate,
    "sweep_m": handle_sweep_m,
    "multiplier_test": handle_multiplier_test,
    "decay_study": handle_decay_study,
    "nakao": handle_nakao,
    "oracle_check": handle_oracle_check,
}


@app.list_tools()
async def list_tools() -> list[Tool]:
    """List all experiment tools"""
    run_logger.log_command("list_tools", {})
    return [
        Tool(
            name="simulate",
            description="Run one damped wave simulation. Writes trace.csv and summary.json and reports energy, identity residual, Strichartz norms, decay fit and Nakao constants.",
            inputSchema=COMMAND_SCHEMA
        ),
        Tool(
            name="sweep_m",
            description="Run the same initial data at every truncation level in run.levels and tabulate differences and Strichartz norms.",
            inputSchema=COMMAND_SCHEMA
        ),
        Tool(
            name="multiplier_test",
            description="Check contraction, commutation, regularization, convergence and Lp ratios of sharp and smooth spectral cutoffs.",
            inputSchema=COMMAND_SCHEMA
        ),
        Tool(
            name="decay_study",
            description="Compare the single-mode oscillator, linear and quintic damped runs against the lower bound, the fitted sandwich bound and the Nakao envelope.",
            inputSchema=COMMAND_SCHEMA
        ),
        Tool(
            name="nakao",
            description="Re-analyze a stored trace: windowed dissipation, inequality constant C1 and envelope. The trace's config hash must match.",
            inputSchema=COMMAND_SCHEMA
        ),
        Tool(
            name="oracle_check",
            description="Compare a small 1D run with a high-precision reference integration.",
            inputSchema=COMMAND_SCHEMA
        )
    ]


@app.call_tool()
async def call_tool(name: str, arguments: Any) -> list[TextContent]:
    """Route tool calls to their handlers"""
    run_logger.log_command(name, arguments)

    try:
        handler = HANDLERS.get(name)
        if handler is None:
            result = [TextContent(type="text", text=f"Unknown tool: {name}")]
        else:
            result = await handler(CommandParams(**(arguments or {})))

        run_logger.log_command_result(name, True, result)
        return result

    except Exception as e:
        error_msg = f"Error executing {name}: {str(e)}"
        run_logger.log_command_result(name, False, None, error=error_msg)
        run_logger.log_error("tool_execution", error_msg, {"tool": name, "arguments": arguments})
        return [TextContent(type="text", text=error_msg)]


async def main():
    """Run the MCP server"""
    from mcp.server.stdio import stdio_server

    async with stdio_server() as (read_stream, write_stream):
        await app.run(read_stream, write_stream, app.create_initialization_options())


if __name__ == "__main__":
    import asyncio
    asyncio.run(main())
