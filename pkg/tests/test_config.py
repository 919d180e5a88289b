import pytest

from src.config import SuiteConfig, dump_config, load_config, parse_config
from src.error_handling import ConfigurationError
from src.root_datum import DatumKind
from src.suites import DEFAULT_SEED

SHIFTED = """
[datum]
multiplicities = [1.0, 0.0]

[[suites]]
id = "ok"
check = "hausdorff_young"
p = 1.5

[[suites]]
id = "shifted"
check = "hausdorff_young_shifted"
p = 1.5
eta = 0.3
"""

def test_parse_small_config(small_config_text):
    """Test the parsed models and the derived requests"""
    config = parse_config(small_config_text)
    assert config.seed == 7
    assert config.output_dir == "out"
    assert config.datum.kind is DatumKind.RANK_ONE
    assert config.grid.radial().x_max == 12.0
    requests = config.requests()
    assert [r.id for r in requests] == ["hy", "closed"]
    assert requests[0].p == 1.5
    assert requests[0].eps_values == (0.2, 0.1, 0.05, 0.02)

def test_defaults():
    """Test an empty configuration"""
    config = parse_config("")
    assert config.suites == []
    assert config.seed == DEFAULT_SEED
    assert config.grid.panel_order == 64

def test_eta_outside_tube_names_line():
    """Test the source, the eps_p message and the line of eta"""
    with pytest.raises(ConfigurationError, match="eps_p") as info:
        parse_config(SHIFTED, "shifted.toml")
    assert info.value.context == "shifted.toml"
    assert info.value.line == 14
    assert "suite 'shifted'" in str(info.value)

def test_unknown_check_names_line():
    """Test a field validator failure"""
    text = '[[suites]]\nid = "a"\ncheck = "fourier"\n'
    with pytest.raises(ConfigurationError, match="unknown check") as info:
        parse_config(text)
    assert info.value.line == 3

def test_duplicate_ids():
    """Test the unique id validator"""
    text = '[[suites]]\nid = "a"\ncheck = "oneil"\n\n[[suites]]\nid = "a"\ncheck = "closed_forms"\n'
    with pytest.raises(ConfigurationError, match="duplicate suite id"):
        parse_config(text)

def test_unknown_key_rejected():
    """Test extra keys"""
    with pytest.raises(ConfigurationError):
        parse_config("[grid]\nx_max = 10.0\nnodes = 5\n")

def test_invalid_toml():
    """Test a syntax error with its line"""
    with pytest.raises(ConfigurationError, match="invalid TOML") as info:
        parse_config('seed = 1\n[grid\n', "bad.toml")
    assert info.value.line == 2

def test_invalid_multiplicities():
    """Test datum build errors point at the multiplicities"""
    text = "[datum]\nkind = \"rank_one\"\nmultiplicities = [0.0, 0.0]\n"
    with pytest.raises(ConfigurationError) as info:
        parse_config(text)
    assert info.value.line == 3

def test_weight_table_line():
    """Test a weight violation points into the weight table"""
    text = ('[[suites]]\nid = "w"\ncheck = "hl_weighted"\np = 1.5\n\n'
            '[suites.weight]\nk = 1.0\na = 0.0\nb = -3.0\n')
    with pytest.raises(ConfigurationError, match="violates") as info:
        parse_config(text)
    assert info.value.line == 6

def test_product_datum_rejects_curved_suite():
    """Test curved suites on a product datum"""
    text = ('[datum]\nkind = "flat_product"\nmultiplicities = [1.0, 1.0]\n\n'
            '[[suites]]\nid = "k"\ncheck = "kernel_bound"\n')
    with pytest.raises(ConfigurationError, match="rank-one"):
        parse_config(text)

def test_family_members():
    """Test per-suite family tables"""
    text = ('[[suites]]\nid = "f"\ncheck = "hausdorff_young"\np = 1.5\n\n'
            '[[suites.family]]\nfamily = "gaussian_bump"\nwidth = 0.5\n')
    request = parse_config(text).requests()[0]
    assert request.family[0].family == "gaussian_bump"
    assert dict(request.family[0].params) == {"width": 0.5}

def test_dump_and_parse_agree(small_config_text):
    """Test that a dumped configuration reads back equal"""
    config = parse_config(small_config_text)
    config.suites[0].bound = 1.5
    again = parse_config(dump_config(config))
    assert again == config
    assert isinstance(again, SuiteConfig)

def test_load_config_missing_file(tmp_path):
    """Test an unreadable path"""
    with pytest.raises(ConfigurationError, match="cannot read"):
        load_config(str(tmp_path / "missing.toml"))

def test_load_config_from_file(tmp_path, small_config_text):
    """Test reading from disk"""
    path = tmp_path / "suite.toml"
    path.write_text(small_config_text)
    assert load_config(str(path)).seed == 7
