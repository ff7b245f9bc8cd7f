import io

import pytest

from cancelmin.models.experiment import ReportRow
from cancelmin.services.report_service import format_report, parse_report, read_report, write_report
from cancelmin.utils.errors import ReportFormatError

HEADER = b"experiment,n,l,l2,mean,std,trials\n"


def test_empty_report_is_header_only():
    assert format_report([]) == HEADER


def test_row_formatting():
    row = ReportRow("GenuineVt", 200, 1, None, 12.5, 3.25, 10)
    assert format_report([row]) == HEADER + b"GenuineVt,200,1,,12.5000,3.2500,10\n"


def test_second_ordinal_is_written_when_present():
    row = ReportRow("SiblingMatching", 175, 1, 16, 2.0, 0.0, 4)
    assert format_report([row]).splitlines()[1] == b"SiblingMatching,175,1,16,2.0000,0.0000,4"


def test_rows_are_sorted_by_experiment_n_l_l2():
    rows = [
        ReportRow("RtVsVt", 50, 1, None, 1.0, 0.0, 1),
        ReportRow("GenuineVt", 200, 2, None, 1.0, 0.0, 1),
        ReportRow("GenuineVt", 50, 6, None, 1.0, 0.0, 1),
        ReportRow("GenuineVt", 50, 1, None, 1.0, 0.0, 1),
        ReportRow("CrossGeneration", 100, 1, 6, 1.0, 0.0, 1),
    ]
    lines = format_report(rows).decode("ascii").splitlines()[1:]
    assert [line.split(",")[:3] for line in lines] == [
        ["CrossGeneration", "100", "1"],
        ["GenuineVt", "50", "1"],
        ["GenuineVt", "50", "6"],
        ["GenuineVt", "200", "2"],
        ["RtVsVt", "50", "1"],
    ]


def test_parse_reads_back_written_rows():
    rows = [
        ReportRow("GenuineVt", 200, 1, None, 12.5, 3.25, 10),
        ReportRow("SiblingMatching", 175, 1, 16, 2.125, 0.5, 4),
    ]
    assert parse_report(format_report(rows)) == rows


@pytest.mark.parametrize("content", [b"", b"experiment,n,l\n", b"a,b,c,d,e,f,g\n"])
def test_parse_rejects_bad_header(content):
    with pytest.raises(ReportFormatError):
        parse_report(content)


@pytest.mark.parametrize("line", [b"GenuineVt,200,1,,x,0,1\n", b"GenuineVt,200,1\n", b"GenuineVt,200,1,,1,0,0\n"])
def test_parse_rejects_bad_rows(line):
    with pytest.raises(ReportFormatError):
        parse_report(HEADER + line)


def test_write_to_path_and_stream(tmp_path):
    rows = [ReportRow("RealGenuine", 0, 0, None, 30.0, 4.0, 6)]
    path = tmp_path / "out" / "report.csv"
    content = write_report(rows, path)
    assert path.read_bytes() == content
    assert read_report(path) == rows
    assert [p.name for p in path.parent.iterdir()] == ["report.csv"]

    stream = io.BytesIO()
    write_report(rows, stream)
    assert stream.getvalue() == content
    assert write_report(rows) == content
