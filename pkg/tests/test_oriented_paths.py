import pytest

from algorithms.homomorphism import contains, equivalent, is_minimal, strictly_contains
from algorithms.oriented_paths import (OPQ_TABLE, all_bit_strings, check_chain,
                                       equivalent_path_length, opq_query, path_query,
                                       pumped_bits, pumped_query, reverse_opq, verify_opq_table)
from utils.errors import QueryError
from utils.syntax import parse_query
from utils.visualization import CHAIN_COLUMNS


@pytest.mark.parametrize("bits, text", [
    ("1", "() <- E(z1, z2)"),
    ("0", "() <- E(z2, z1)"),
    ("11", "() <- E(z1, z2), E(z2, z3)"),
    ("101", "() <- E(z1, z2), E(z3, z2), E(z3, z4)"),
])
def test_opq_query(bits, text):
    assert opq_query(bits) == parse_query(text)


def test_opq_query_other_relation():
    assert opq_query("1", "R") == parse_query("() <- R(z1, z2)")


@pytest.mark.parametrize("bits", ["", "12", "1a"])
def test_opq_query_invalid(bits):
    with pytest.raises(QueryError):
        opq_query(bits)


@pytest.mark.parametrize("relation", ["e", "", "1E", "E-F"])
def test_opq_query_invalid_relation(relation):
    with pytest.raises(QueryError):
        opq_query("11", relation)
    with pytest.raises(QueryError):
        check_chain(1, relation)


def test_path_query():
    assert path_query(3) == opq_query("111")


@pytest.mark.parametrize("bits, reversed_bits", [
    ("1", "0"),
    ("110", "100"),
    ("1011", "0010"),
    ("1010", "1010"),
])
def test_reverse_opq(bits, reversed_bits):
    assert reverse_opq(bits) == reversed_bits


def test_reverse_opq_involution_and_equivalence():
    """Ler o caminho de trás para a frente dá uma consulta equivalente."""
    for bits in all_bit_strings(6):
        assert reverse_opq(reverse_opq(bits)) == bits
        assert equivalent(opq_query(bits), opq_query(reverse_opq(bits)))


@pytest.mark.parametrize("i, bits", [
    (0, "111"),
    (1, "11011"),
    (2, "1101011"),
    (3, "110101011"),
])
def test_pumped_bits(i, bits):
    assert pumped_bits(i) == bits
    assert pumped_query(i) == opq_query(bits)


def test_pumped_bits_negative():
    with pytest.raises(QueryError):
        pumped_bits(-1)


def test_all_bit_strings():
    strings = all_bit_strings(4)
    assert len(strings) == 30
    assert strings[:2] == ["1", "0"]
    assert len(set(strings)) == 30


def test_short_paths_are_equivalent_to_directed_paths():
    """Toda OPQ de comprimento até 4 é equivalente a algum P_k."""
    for bits in all_bit_strings(4):
        k = equivalent_path_length(bits)
        assert k is not None
        assert k <= len(bits)


def test_pumped_query_not_a_directed_path():
    assert equivalent_path_length("11011") is None
    for k in range(1, 6):
        assert not equivalent(opq_query("11011"), path_query(k))


def test_pumped_query_sandwich():
    """O_111 ⊏ O_11011 ⊏ O_11."""
    assert strictly_contains(opq_query("111"), opq_query("11011"))
    assert strictly_contains(opq_query("11011"), opq_query("11"))
    assert is_minimal(opq_query("11011"))


def test_cycles_below_paths():
    loop = parse_query("() <- E(x, x)")
    cycle = parse_query("() <- E(x, y), E(y, x)")
    assert contains(loop, cycle)
    for i in range(4):
        assert contains(cycle, pumped_query(i))


def test_opq_table():
    report = verify_opq_table()
    assert report.passed
    assert len(report.table) == len(OPQ_TABLE) == 17


def test_opq_table_rows_cover_all_short_strings():
    covered = set()
    for bits, reversal, _ in OPQ_TABLE:
        covered.add(bits)
        covered.add(reversal or bits)
    assert covered == set(all_bit_strings(4))


@pytest.mark.parametrize("n", [0, 3, 10])
def test_check_chain(n):
    report = check_chain(n)
    assert report.passed
    assert report.bound == n
    assert len(report.table) == 2 * (n + 1)
    assert list(report.table.columns) == CHAIN_COLUMNS
    assert report.failures().empty


def test_check_chain_last_pair():
    table = check_chain(2).table
    last = table.iloc[-2]
    assert last["Contida"] == "Q2"
    assert last["Contém"] == "O11"
    assert bool(last["Obtido"])


def test_check_chain_negative():
    with pytest.raises(QueryError):
        check_chain(-1)


if __name__ == "__main__":
    pytest.main([__file__])
