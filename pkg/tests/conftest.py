import pytest

from noma_crs.model import EhProtocol, SystemParams, db_to_linear

# Channel variances (sr, sd, rd) of the two SNR-sweep scenarios.
FIG3 = (db_to_linear(3), db_to_linear(0), db_to_linear(3))
FIG4 = (db_to_linear(10), db_to_linear(3), db_to_linear(10))

PROTOCOLS = [
    EhProtocol.power_sharing(0.1),
    EhProtocol.power_sharing(0.3),
    EhProtocol.time_sharing(0.1),
    EhProtocol.time_sharing(0.2),
    EhProtocol.ideal(),
    EhProtocol.benchmark(),
]
EH_PROTOCOLS = [p for p in PROTOCOLS if p.harvests]


def make_params(variances=FIG4, alpha=0.1, snr_db=20.0, protocol=None, eta=0.95):
    s_sr, s_sd, s_rd = variances
    return SystemParams(
        sigma2_sr=s_sr, sigma2_sd=s_sd, sigma2_rd=s_rd, alpha=alpha,
        snr_total=db_to_linear(snr_db), eta=eta,
        protocol=protocol or EhProtocol.ideal(),
    )


_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    key = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.failed):
        detail = dict(report.user_properties).get("detail", "")
        _ACCEPTANCE.setdefault(key, []).append((item.name, report.passed, detail))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id): acceptance criterion the test checks")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE):
        for name, passed, detail in _ACCEPTANCE[key]:
            tr.write_line(f"criterion {key:<3} {'PASS' if passed else 'FAIL'}  {name}  {detail}")
