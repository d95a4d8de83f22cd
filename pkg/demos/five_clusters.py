"""Twelve agents, no truth seekers: the run freezes into five clusters at t = 3."""
from truthseekers import check_fixture, fixture, stability_report
from truthseekers.export import fixture_report_text

report = check_fixture("five_clusters")
print(fixture_report_text(fixture("five_clusters"), report, stability_report(report.trajectory)))
