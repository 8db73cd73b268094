from plone.testing import Layer
from plone.testing import zca
from whichpath.setuphandlers import registerComponents
from whichpath.setuphandlers import unregisterComponents


class WhichPathLayer(Layer):
    """Settings registry and presets registered for every test"""

    defaultBases = (zca.UNIT_TESTING,)

    def testSetUp(self):
        self["registry"] = registerComponents()

    def testTearDown(self):
        unregisterComponents()
        del self["registry"]


WHICHPATH_UNIT_TESTING = WhichPathLayer()
