"""Honour plone.testing ``layer`` attributes when the suite runs under pytest,
the way zope.testrunner does: layers (bases first) are set up once per class
and their ``testSetUp``/``testTearDown`` hooks wrap every test.
"""

import pytest


def _resolve(layer, seen=None):
    order = [] if seen is None else seen
    for base in getattr(layer, "__bases__", ()):
        _resolve(base, order)
    if layer not in order:
        order.append(layer)
    return order


@pytest.fixture(scope="class", autouse=True)
def _plone_testing_layer(request):
    layer = getattr(request.cls, "layer", None) if request.cls else None
    if layer is None:
        yield None
        return
    layers = _resolve(layer)
    done = []
    try:
        for item in layers:
            item.setUp()
            done.append(item)
        yield layers
    finally:
        for item in reversed(done):
            item.tearDown()


@pytest.fixture(autouse=True)
def _plone_testing_test_layer(_plone_testing_layer):
    if not _plone_testing_layer:
        yield
        return
    done = []
    try:
        for item in _plone_testing_layer:
            item.testSetUp()
            done.append(item)
        yield
    finally:
        for item in reversed(done):
            item.testTearDown()
