"""Smoke test for the covermonoid extension module. Run with `python python/smoke_test.py`."""

import covermonoid as cm


def main():
    rays = cm.extremal_rays("4")
    assert len(rays) == 4, rays

    pres = cm.presentation("4")
    assert len(pres["relations"]) == 1, pres

    assert cm.sigma("2,2") == []
    assert cm.sigma("4") != []

    om = cm.omega(3, 8)
    assert all(isinstance(q, str) for q in om["omega"])

    inv = cm.invariants(2, 5, 8, 1)
    assert isinstance(inv, dict)

    assert cm.smooth_stack("2")["smooth"] is True
    assert cm.reducible("5")["verdict"] == "unknown"

    try:
        cm.extremal_rays("not a group")
    except ValueError:
        pass
    else:
        raise AssertionError("bad group spec accepted")

    report = cm.verify(max_order=6)
    failed = [row for row in report if not row["status"] == "pass"]
    assert not failed, failed

    print("smoke test passed: %d properties verified" % len(report))


if __name__ == "__main__":
    main()
