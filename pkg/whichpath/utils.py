from plone.registry.interfaces import IRegistry
from whichpath.interfaces import IPresenceSettings
from zope.component import queryUtility
from zope.interface import implementer
from zope.schema import getFieldsInOrder


@implementer(IPresenceSettings)
class DefaultSettings:
    """The schema defaults of ``IPresenceSettings``"""

    def __init__(self, **overrides):
        for name, field in getFieldsInOrder(IPresenceSettings):
            setattr(self, name, overrides.pop(name, field.default))
        if overrides:
            raise TypeError(f"unknown settings: {', '.join(sorted(overrides))}")


def getSettings():
    """Look up the presence settings.

    This inspects ``IPresenceSettings`` in the registry and falls back to
    the schema defaults when there is no registry or the records are not
    registered.
    """

    registry = queryUtility(IRegistry)
    if registry is None:
        return DefaultSettings()

    try:
        return registry.forInterface(IPresenceSettings)
    except KeyError:
        return DefaultSettings()


def pick(value, default):
    """``value`` unless it is None"""
    return default if value is None else value
