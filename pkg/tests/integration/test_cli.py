import pytest
import json

from vertexlab.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from vertexlab.logging import RunLedger


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.strip(), captured.err


class TestRemainderCommand:
    """Test the remainder subcommand."""

    def test_closed(self, capsys):
        """Test R_1(0,1,2,3) by the closed formula."""
        code, out, _ = run(capsys, "remainder", "--indices", "0,1,2,3", "--method", "closed")
        assert code == EXIT_OK
        assert out == "1/6"

    def test_recursive(self, capsys):
        """Test R_2(0..5) by the recursion."""
        code, out, _ = run(capsys, "remainder", "--indices", "0,1,2,3,4,5", "--method", "recursive")
        assert code == EXIT_OK
        assert out == "1/480"

    def test_limit(self, capsys):
        """Test the limit of R_2(0,1,2,3,x,x+1)."""
        code, out, _ = run(capsys, "remainder", "--indices", "0,1,2,3", "--method", "limit")
        assert code == EXIT_OK
        assert out == "1/24"

    def test_orthogonal(self, capsys):
        """Test the determinant-analogue remainder and its normalized form."""
        assert run(capsys, "remainder", "--I", "0,0", "--J", "1,1", "--method", "orth")[1] == "7/3"
        assert run(capsys, "remainder", "--I", "0,0", "--J", "1,1", "--method", "free")[1] == "-7/3"

    def test_json(self, capsys):
        """Test the JSON report."""
        code, out, _ = run(capsys, "remainder", "--indices", "0,1,3,4", "--format", "json")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["value"] == "-5/24"
        assert report["method"] == "closed"
        assert report["indices"] == [[0, 1, 3, 4]]

    def test_missing_lists(self, capsys):
        """Test a method without its index lists is a usage error."""
        code, _, err = run(capsys, "remainder", "--method", "orth")
        assert code == EXIT_USAGE
        assert "--I" in err

    def test_odd_weight(self, capsys):
        """Test an odd weight list exits with a usage error."""
        code, _, _ = run(capsys, "remainder", "--indices", "0,1,2,4")
        assert code == EXIT_USAGE

    def test_bad_integer_list(self, capsys):
        """Test a malformed index list."""
        code, _, err = run(capsys, "remainder", "--indices", "0,one,2,3")
        assert code == EXIT_USAGE
        assert "integers" in err


class TestProductCommands:
    """Test circle, wick, ope and realize."""

    def test_central_charge(self, capsys):
        """Test W1(3)W1 = c/2 for O(1)."""
        code, out, _ = run(capsys, "circle", "W1", "3", "W1", "--family", "o")
        assert code == EXIT_OK
        assert out == "1/4"

    def test_ope_lists_poles(self, capsys):
        """Test the OPE prints one line per nonzero pole."""
        code, out, _ = run(capsys, "ope", "W1", "W1", "--family", "o")
        assert code == EXIT_OK
        assert "(3): 1/4" in out.splitlines()

    def test_free_field_circle(self, capsys):
        """Test beta(0)gamma = 1."""
        code, out, _ = run(capsys, "circle", "b1[0]", "0", "g1[0]")
        assert code == EXIT_OK
        assert out == "1"

    def test_wick_json(self, capsys):
        """Test the JSON mirror of a Wick product."""
        code, out, _ = run(capsys, "wick", "b1[0]", "g1[0]", "--format", "json")
        assert code == EXIT_OK
        assert json.loads(out)["type"] == "VPoly"

    def test_realize(self, capsys):
        """Test W1 realizes as a fermion bilinear in O(1)."""
        code, out, _ = run(capsys, "realize", "W1", "--family", "o")
        assert code == EXIT_OK
        assert "f[0] f[1]" in out

    def test_realize_rejects_free_fields(self, capsys):
        """Test realize wants an Omega expression."""
        code, _, _ = run(capsys, "realize", "b1[0]")
        assert code == EXIT_USAGE

    def test_parse_error(self, capsys):
        """Test malformed input exits 2."""
        code, _, err = run(capsys, "circle", "W1 + $", "0", "W1")
        assert code == EXIT_USAGE
        assert err.startswith("error:")

    def test_max_weight(self, capsys):
        """Test inputs above --max-weight are refused."""
        code, _, err = run(capsys, "circle", "W3", "0", "W1", "--max-weight", "2")
        assert code == EXIT_USAGE
        assert "max-weight" in err

    def test_unknown_family(self, capsys):
        """Test argparse rejects an unknown family."""
        with pytest.raises(SystemExit) as exc_info:
            main(["circle", "W1", "0", "W1", "--family", "gl"])
        assert exc_info.value.code == 2


class TestRelationCommand:
    """Test the relation and decouple subcommands."""

    def test_orthogonal_minimal(self, capsys):
        """Test the default O(1) relation carries remainder -7/3."""
        code, out, _ = run(capsys, "relation", "--family", "o", "--format", "json")
        assert code == EXIT_OK
        document = json.loads(out)
        assert document["remainder"] == "-7/3"
        assert document["weight"] == 4
        assert document["kernel_ok"] is True

    def test_pfaffian_text(self, capsys):
        """Test the Sp(1) relation header line."""
        code, out, _ = run(capsys, "relation", "--indices", "0,1,2,3")
        assert code == EXIT_OK
        header = out.splitlines()[0]
        assert "weight=8" in header
        assert "remainder=1/6" in header

    def test_determinant_lists(self, capsys):
        """Test --I and --J select the determinant analogue."""
        code, out, _ = run(capsys, "relation", "--family", "o", "--I", "0,0", "--J", "1,1")
        assert code == EXIT_OK
        assert "remainder=-7/3" in out.splitlines()[0]

    def test_indices_with_orthogonal(self, capsys):
        """Test --indices is refused for the orthogonal family."""
        code, _, _ = run(capsys, "relation", "--family", "o", "--indices", "0,1,2,3")
        assert code == EXIT_USAGE

    def test_lists_with_symplectic(self, capsys):
        """Test --I and --J are refused outside the orthogonal family."""
        code, _, _ = run(capsys, "relation", "--I", "0,0", "--J", "1,1")
        assert code == EXIT_USAGE

    def test_cache_and_ledger(self, capsys, tmp_path):
        """Test repeated runs hit the cache and are both recorded."""
        store = str(tmp_path / "store")
        first = run(capsys, "relation", "--family", "o", "--cache-dir", store)
        second = run(capsys, "relation", "--family", "o", "--cache-dir", store)
        assert first == second
        rows = RunLedger(store).recent()
        assert len(rows) == 2
        assert {row.command for row in rows} == {"relation"}

    def test_decouple(self, capsys):
        """Test the O(1) chain through W^3."""
        code, out, _ = run(capsys, "decouple", "--family", "o", "--through", "3")
        assert code == EXIT_OK
        assert out.startswith("W3 = ")

    def test_decouple_below_first(self, capsys):
        """Test there is nothing to decouple below W^3 in O(1)."""
        code, out, _ = run(capsys, "decouple", "--family", "o", "--through", "1")
        assert code == EXIT_OK
        assert out == "no decoupling"


@pytest.mark.slow
class TestLongCommands:
    """Test the selftest and appendix commands."""

    def test_selftest(self, capsys):
        """Test every invariant check passes."""
        code, out, _ = run(capsys, "selftest")
        assert code == EXIT_OK
        assert "FAIL" not in out
        assert "O(1) decouplings through W7" in out
        assert "random vertex algebra identities" in out

    def test_verify_appendix(self, capsys):
        """Test the Osp(1,2) reference relation."""
        code, out, _ = run(capsys, "verify-appendix")
        assert code == EXIT_OK
        assert out.startswith("kernel_ok=true remainder=109/56000")
