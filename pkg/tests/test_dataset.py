"""Panel parsing, window averaging, and training-set assembly."""
import pytest

from distress_lda import (
    DuplicateRecordError,
    EmptyWindowError,
    GroupLabel,
    InsufficientGroupError,
    LabeledSample,
    MissingLabelError,
    ParseError,
    RatioVector,
    SchemaError,
    VariableCountError,
    average_ratios,
    build_training_set,
    case_processing_summary,
    panel_labels,
    parse_panel,
    serialize_panel,
    training_set_from_panel,
)

HEADER = "bank,year,eaa,roae,roaa,nii,laaa,bdtla"


def _panel(*rows: str) -> str:
    return "\n".join([HEADER, *rows]) + "\n"


def _vec(k: float) -> RatioVector:
    return RatioVector(k, k, k, k, k, k)


class TestParsePanel:
    def test_basic_row(self):
        records = parse_panel(_panel("Alpha,2014,0.1,0.2,0.3,0.4,0.5,0.6"))
        assert len(records) == 1
        rec = records[0]
        assert rec.bank_id == "Alpha"
        assert rec.year == 2014
        assert rec.available
        assert rec.ratios == RatioVector(0.1, 0.2, 0.3, 0.4, 0.5, 0.6)

    def test_column_order_is_free(self):
        text = "year,bdtla,laaa,nii,roaa,roae,eaa,bank\n2013,6,5,4,3,2,1,Alpha\n"
        rec = parse_panel(text)[0]
        assert rec.ratios == RatioVector(1, 2, 3, 4, 5, 6)

    def test_blank_lines_ignored(self):
        records = parse_panel(_panel("", "Alpha,2014,1,1,1,1,1,1", "", ""))
        assert len(records) == 1

    def test_all_zero_row_is_unavailable(self):
        rec = parse_panel(_panel("Alpha,2016,0,0,0,0,0,0"))[0]
        assert not rec.available
        assert rec.ratios == _vec(0.0)

    def test_all_empty_row_is_unavailable(self):
        rec = parse_panel(_panel("Alpha,2016,,,,,,"))[0]
        assert not rec.available
        assert rec.ratios == _vec(0.0)

    def test_missing_column_rejected(self):
        with pytest.raises(SchemaError, match="'bdtla'"):
            parse_panel("bank,year,eaa,roae,roaa,nii,laaa\nAlpha,2014,1,1,1,1,1\n")

    def test_empty_text_rejected(self):
        with pytest.raises(SchemaError, match="header"):
            parse_panel("")

    def test_bad_year_names_row_and_column(self):
        with pytest.raises(ParseError, match=r"row 2: column 'year'"):
            parse_panel(_panel("Alpha,20x4,1,1,1,1,1,1"))

    def test_bad_number_names_row_and_column(self):
        with pytest.raises(ParseError, match=r"row 3: column 'roaa': not a number: 'x'"):
            parse_panel(_panel("Alpha,2014,1,1,1,1,1,1", "Beta,2014,1,1,x,1,1,1"))

    def test_non_finite_cell_rejected(self):
        with pytest.raises(ParseError, match="not finite"):
            parse_panel(_panel("Alpha,2014,1,inf,1,1,1,1"))

    def test_empty_bank_rejected(self):
        with pytest.raises(ParseError, match="'bank'"):
            parse_panel(_panel(",2014,1,1,1,1,1,1"))

    def test_duplicate_bank_year_rejected(self):
        with pytest.raises(DuplicateRecordError, match="Alpha"):
            parse_panel(_panel("Alpha,2014,1,1,1,1,1,1", "Alpha,2014,2,2,2,2,2,2"))

    def test_same_bank_different_years_allowed(self):
        records = parse_panel(_panel("Alpha,2014,1,1,1,1,1,1", "Alpha,2015,2,2,2,2,2,2"))
        assert [r.year for r in records] == [2014, 2015]

    def test_round_trip(self):
        records = parse_panel(
            _panel(
                '"Comma, Bank",2012,0.1,-0.2,0.3,0.04,0.5,1.1892',
                '"Comma, Bank",2013,0,0,0,0,0,0',
                "Other,2012,1e-3,2,3,4,5,6",
            )
        )
        again = parse_panel(serialize_panel(records))
        assert again == records

    def test_round_trip_with_labels(self):
        records = parse_panel(_panel("Alpha,2014,1,1,1,1,1,1", "Beta,2014,2,2,2,2,2,2"))
        labels = {"Alpha": GroupLabel.BANKRUPT, "Beta": GroupLabel.NONBANKRUPT}
        text = serialize_panel(records, labels)
        assert parse_panel(text) == records
        assert panel_labels(text) == labels


class TestPanelLabels:
    def test_reads_labels_per_bank(self):
        text = HEADER + ",label\nAlpha,2014,1,1,1,1,1,1,bankrupt\nBeta,2014,2,2,2,2,2,2,nonbankrupt\n"
        assert panel_labels(text) == {
            "Alpha": GroupLabel.BANKRUPT,
            "Beta": GroupLabel.NONBANKRUPT,
        }

    def test_label_column_required(self):
        with pytest.raises(SchemaError, match="'label'"):
            panel_labels(_panel("Alpha,2014,1,1,1,1,1,1"))

    def test_empty_cells_skipped(self):
        text = HEADER + ",label\nAlpha,2014,1,1,1,1,1,1,\nAlpha,2015,1,1,1,1,1,1,bankrupt\n"
        assert panel_labels(text) == {"Alpha": GroupLabel.BANKRUPT}

    def test_unknown_label_rejected(self):
        text = HEADER + ",label\nAlpha,2014,1,1,1,1,1,1,solvent\n"
        with pytest.raises(ParseError, match="unknown label 'solvent'"):
            panel_labels(text)

    def test_conflicting_labels_rejected(self):
        text = (
            HEADER
            + ",label\nAlpha,2014,1,1,1,1,1,1,bankrupt\nAlpha,2015,1,1,1,1,1,1,nonbankrupt\n"
        )
        with pytest.raises(ParseError, match="conflicting"):
            panel_labels(text)

    def test_label_case_insensitive(self):
        assert GroupLabel.from_string(" Bankrupt ") is GroupLabel.BANKRUPT
        with pytest.raises(ValueError):
            GroupLabel.from_string("failed")


class TestRatioVector:
    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="'roae'"):
            RatioVector(0.1, float("nan"), 0.3, 0.4, 0.5, 0.6)

    def test_array_round_trip(self):
        v = RatioVector(0.1, -0.2, 0.3, 0.4, 1.5, 0.6)
        assert RatioVector.from_array(v.as_array()) == v

    def test_from_array_length_checked(self):
        with pytest.raises(ValueError):
            RatioVector.from_array([1.0, 2.0])


class TestAverageRatios:
    def test_window_mean_skips_unavailable_years(self):
        records = parse_panel(
            _panel(
                "Alpha,2012,0.2,0.2,0.2,0.2,0.2,0.2",
                "Alpha,2013,0,0,0,0,0,0",
                "Alpha,2014,0.4,0.4,0.4,0.4,0.4,0.4",
                "Alpha,2016,9,9,9,9,9,9",
            )
        )
        avg = average_ratios(records, "Alpha", (2012, 2015))
        assert avg.as_array() == pytest.approx([0.3] * 6, rel=1e-12)

    def test_single_available_year_passes_through(self):
        records = parse_panel(_panel("Alpha,2013,0.1,0.2,0.3,0.4,0.5,0.6"))
        avg = average_ratios(records, "Alpha", (2012, 2015))
        assert avg == RatioVector(0.1, 0.2, 0.3, 0.4, 0.5, 0.6)

    def test_empty_window_rejected(self):
        records = parse_panel(_panel("Alpha,2016,1,1,1,1,1,1"))
        with pytest.raises(EmptyWindowError, match="'Alpha' has no available data in 2012-2015"):
            average_ratios(records, "Alpha", (2012, 2015))

    def test_bundled_panel_reproduces_training_average(self, evaluation_panel):
        """The failed bank's 2012-2015 mean EAA is 0.13388 to 4 decimals."""
        records, _ = evaluation_panel
        avg = average_ratios(records, "Moza Banco, S.A", (2012, 2015))
        assert avg.eaa == pytest.approx(0.13388, abs=5e-4)
        assert avg.laaa == pytest.approx(0.74642, abs=5e-4)


class TestTrainingSetAssembly:
    def test_counts_and_order(self):
        samples = [
            LabeledSample("B1", _vec(0.1), GroupLabel.BANKRUPT),
            LabeledSample("H1", _vec(0.2), GroupLabel.NONBANKRUPT),
            LabeledSample("B2", _vec(0.3), GroupLabel.BANKRUPT),
            LabeledSample("H2", _vec(0.4), GroupLabel.NONBANKRUPT),
            LabeledSample("H3", _vec(0.5), GroupLabel.NONBANKRUPT),
            LabeledSample("H4", _vec(0.6), GroupLabel.NONBANKRUPT),
            LabeledSample("H5", _vec(0.7), GroupLabel.NONBANKRUPT),
        ]
        ts = build_training_set(samples)
        assert (ts.n0, ts.n1, ts.p) == (2, 5, 6)
        assert ts.n0 + ts.n1 == len(ts.samples)
        assert [s.bank_id for s in ts.samples] == ["B1", "H1", "B2", "H2", "H3", "H4", "H5"]

    def test_single_member_group_rejected(self):
        samples = [LabeledSample("B1", _vec(0.1), GroupLabel.BANKRUPT)] + [
            LabeledSample(f"H{i}", _vec(0.2 + i), GroupLabel.NONBANKRUPT) for i in range(12)
        ]
        with pytest.raises(InsufficientGroupError, match="bankrupt=1"):
            build_training_set(samples)

    def test_six_samples_cannot_carry_six_variables(self):
        samples = [LabeledSample(f"B{i}", _vec(0.1 * i), GroupLabel.BANKRUPT) for i in range(3)] + [
            LabeledSample(f"H{i}", _vec(1 + i), GroupLabel.NONBANKRUPT) for i in range(3)
        ]
        with pytest.raises(VariableCountError, match="6 variables exceed"):
            build_training_set(samples)

    def test_seven_samples_suffice(self):
        samples = [LabeledSample(f"B{i}", _vec(0.1 * i), GroupLabel.BANKRUPT) for i in range(3)] + [
            LabeledSample(f"H{i}", _vec(1 + i), GroupLabel.NONBANKRUPT) for i in range(4)
        ]
        ts = build_training_set(samples)
        assert (ts.n0, ts.n1) == (3, 4)

    def test_from_panel_first_appearance_order(self):
        text = _panel(
            "Beta,2013,1,1,1,1,1,1",
            "Alpha,2012,2,2,2,2,2,2",
            "Beta,2014,3,3,3,3,3,3",
            "Gamma,2012,4,4,4,4,4,4",
            "Delta,2012,5,5,5,5,5,5",
            "Epsilon,2012,6,6,6,6,6,6",
            "Zeta,2012,7,7,7,7,7,7",
            "Eta,2012,8,8,8,8,8,8",
        )
        labels = {"Beta": GroupLabel.BANKRUPT, "Alpha": GroupLabel.BANKRUPT}
        labels.update(
            {b: GroupLabel.NONBANKRUPT for b in ("Gamma", "Delta", "Epsilon", "Zeta", "Eta")}
        )
        ts = training_set_from_panel(parse_panel(text), labels)
        assert [s.bank_id for s in ts.samples][:2] == ["Beta", "Alpha"]
        assert ts.samples[0].ratios == _vec(2.0)  # mean of 1 and 3

    def test_from_panel_requires_labels(self):
        records = parse_panel(_panel("Alpha,2014,1,1,1,1,1,1"))
        with pytest.raises(MissingLabelError, match="'Alpha'"):
            training_set_from_panel(records, {})

    def test_bundled_panel_shape(self, training_set):
        assert (training_set.n0, training_set.n1, training_set.p) == (2, 12, 6)

    def test_case_processing_summary(self, training_set):
        summary = case_processing_summary(training_set)
        assert set(summary) == {"eaa", "roae", "roaa", "nii", "laaa", "bdtla"}
        assert summary["eaa"]["bankrupt"] == {
            "valid": 2,
            "valid_percent": 100.0,
            "missing": 0,
            "missing_percent": 0.0,
        }
        assert summary["bdtla"]["nonbankrupt"]["valid"] == 12
