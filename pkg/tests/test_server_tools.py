"""
Test MCP tool routing and the text handlers
"""
import pytest

from dampwave import server
from dampwave.models.params import CommandParams
from dampwave.tools.analysis_tools import format_oracle_check
from dampwave.tools.simulation_tools import handle_simulate

ZERO_RUN = """
[domain]
modes = 8

[run]
duration = 0.05
sample_stride = 5

[initial]
kind = zero
"""


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "zero.cfg"
    path.write_text(ZERO_RUN)
    return str(path)


@pytest.mark.asyncio
async def test_list_tools():
    """Test every experiment command is exposed as a tool"""
    tools = await server.list_tools()
    assert [tool.name for tool in tools] == list(server.HANDLERS)
    assert len(tools) == 6
    assert all(tool.inputSchema['required'] == ["config_path"] for tool in tools)


@pytest.mark.asyncio
async def test_call_unknown_tool():
    """Test unknown tool names are reported, not raised"""
    result = await server.call_tool("launch_rocket", {"config_path": "x.cfg"})
    assert result[0].text == "Unknown tool: launch_rocket"


@pytest.mark.asyncio
async def test_call_simulate(config_path, tmp_path):
    """Test the simulate tool runs and reports its output files"""
    result = await server.call_tool("simulate", {"config_path": config_path, "out_dir": str(tmp_path / "out")})

    # Verify
    text = result[0].text
    assert text.startswith("🌊 Simulation ✅ PASS")
    assert "Steps: 50" in text
    assert (tmp_path / "out" / "trace.csv").exists()


@pytest.mark.asyncio
async def test_call_without_config_path():
    """Test argument validation errors come back as text"""
    result = await server.call_tool("simulate", {})
    assert result[0].text.startswith("Error executing simulate")


@pytest.mark.asyncio
async def test_handler_reports_reason(tmp_path):
    """Test a missing config file is reported with its reason code"""
    result = await handle_simulate(CommandParams(config_path=str(tmp_path / "absent.cfg")))
    assert result[0].text.startswith("❌ Simulation failed (io_error)")


def test_format_oracle_check():
    """Test the oracle summary text"""
    text = format_oracle_check({'deviation': 2.5e-8, 'threshold': 1e-6, 'modes': 4, 'dt': 1e-3, 'duration': 10.0})
    assert text.splitlines() == [
        "✅ Oracle check: deviation 2.500e-08 <= 1.0e-06",
        "Modes: 4, dt = 0.001, T = 10",
    ]
