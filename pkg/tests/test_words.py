import json
from pathlib import Path

import pytest

import mvlat
from mvlat.diagram import validate_diagram
from mvlat.errors import DomainError
from mvlat.minima import LatticeSpec, lattice_vrm
from mvlat.complex import complex_from_minima
from mvlat.stabilize import A2_TABLE
from mvlat.words import (
    CONVENTION,
    LetterDictionary,
    a2_corpus,
    alphabet_audit,
    lattice_diagram,
    load_names,
    slab_decompose,
    table_alignment,
    white_expected,
    white_vertex_pattern,
    word_of,
)

NAMES_FILE = Path(mvlat.__file__).with_name("data") / "letter_names.json"


def test_example_word_has_six_distinct_letters():
    d = lattice_diagram(LatticeSpec(2, 26, 121))
    assert validate_diagram(d).ok
    w = word_of(d)
    assert len(w) == 6
    assert len(set(w.letters)) == 6


def test_example_word_names():
    dictionary = LetterDictionary()
    d = lattice_diagram(LatticeSpec(2, 26, 121))
    w = word_of(d, dictionary)
    load_names(dictionary)
    # only the p and x slabs share a class with a calibrated table letter
    assert w.text(dictionary).split()[2::3] == ["p", "x"]
    assert sum(i in dictionary.names for i in w.letters) == 2


def test_slabs_partition_vertices():
    for spec in [LatticeSpec(2, 26, 121), LatticeSpec(1, 13, 34), LatticeSpec(3, 7, 47)]:
        d = lattice_diagram(spec)
        slabs = slab_decompose(d)
        verts = [v for s in slabs for v in s.vertices]
        assert sorted(verts) == list(range(len(d.positions)))
        finite = sorted((a, b) for a, b, _ in d.edges if b is not None)
        covered = sorted((a, b) for s in slabs for a, b, _ in s.internal)
        covered += sorted((max(a, b), min(a, b)) for s in slabs for a, b, _ in s.down)
        assert len(covered) == len(finite)


def test_word_is_deterministic():
    d = lattice_diagram(LatticeSpec(2, 26, 121))
    assert word_of(d).serials == word_of(d).serials


@pytest.mark.parametrize("b,n", [(2, 5), (2, 7), (3, 8), (5, 13), (8, 21), (7, 60), (13, 34), (11, 97)])
def test_white_sample(b, n):
    spec = LatticeSpec(1, b, n)
    cx = complex_from_minima(lattice_vrm(spec), (n,) * 3)
    assert {frozenset(cx.faces[f] for f in v.faces) for v in cx.vertices} == white_vertex_pattern(b, n)
    w = word_of(lattice_diagram(spec))
    assert len(w) == white_expected(b, n)
    assert len(set(w.letters[1:])) == 1 and w.letters[0] not in w.letters[1:]


def test_white_pattern_counts():
    pat = white_vertex_pattern(2, 5)
    assert len(pat) == 5
    pts = set().union(*pat)
    assert {(1, 1, 2), (2, 2, 1)} <= pts


def test_white_rejects():
    with pytest.raises(DomainError):
        white_expected(4, 10)
    with pytest.raises(DomainError):
        white_vertex_pattern(6, 10)


def test_dictionary_roundtrip(tmp_path):
    dictionary = LetterDictionary()
    word_of(lattice_diagram(LatticeSpec(2, 26, 121)), dictionary, "(2,26,121)")
    dictionary.names[0] = "0"
    p = tmp_path / "dict.json"
    dictionary.save(p)
    back = LetterDictionary.load(p)
    assert back == dictionary
    assert json.loads(p.read_text())["convention"] == CONVENTION


def test_dictionary_convention_checked():
    with pytest.raises(DomainError):
        LetterDictionary.from_json({"convention": "other", "letters": []})


def test_names_file_convention_checked(tmp_path):
    p = tmp_path / "names.json"
    p.write_text(json.dumps({"convention": "other", "letters": []}))
    with pytest.raises(DomainError):
        load_names(LetterDictionary(), p)


def test_names_file_matches_alignment():
    names, mismatches, dictionary = table_alignment(A2_TABLE)
    serial = {i: s for s, i in dictionary.ids.items()}
    recomputed = {serial[i]: sorted(chars) for i, chars in names.items()}
    data = json.loads(NAMES_FILE.read_text())
    assert data["convention"] == CONVENTION
    assert {row["serial"]: sorted(row["names"]) for row in data["letters"]} == recomputed
    assert sorted(data["unaligned"]) == sorted({m[2] for m in mismatches})


def test_alignment_is_one_to_one_per_class():
    names, mismatches, _ = table_alignment(A2_TABLE)
    assert all(len(chars) == 1 for chars in names.values())
    # rows with character 4 decompose into one more slab than they have characters
    assert {m[2] for m in mismatches} == {"0 4 bx", "0 4 3 2"}
    assert all(m[3] == len(m[2].replace(" ", "")) + 1 for m in mismatches)


def test_audit_small_and_empty():
    rep = alphabet_audit([])
    assert rep.lattices == 0 and rep.classes == 0
    corpus = a2_corpus(4, 60)
    assert all(s.a == 2 and 2 * s.b <= s.N for s in corpus)
    a = alphabet_audit(corpus)
    b = alphabet_audit(corpus, jobs=2)
    assert a.dictionary.ids == b.dictionary.ids and a.head_classes == b.head_classes
    assert sum(a.occurrences.values()) >= a.lattices


def test_audit_rejects_other_a():
    with pytest.raises(DomainError):
        alphabet_audit([LatticeSpec(1, 3, 7)])
