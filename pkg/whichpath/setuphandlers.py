from plone.registry import Registry
from plone.registry.fieldfactory import persistentFieldAdapter
from plone.registry.interfaces import IRegistry
from whichpath.interfaces import IPresenceSettings
from whichpath.interfaces import IPresetFactory
from whichpath.presets import BUILTIN_PRESETS
from zope.component import getGlobalSiteManager
from zope.component import provideAdapter
from zope.component import provideUtility
from zope.component import queryUtility


def registerComponents(registry=None):
    """Startup hook for applications hosting whichpath; the ``cli`` group
    calls it before every command.

    Makes sure a registry holding the ``IPresenceSettings`` records is
    available and registers the built-in presets as named ``IPresetFactory``
    utilities, leaving presets registered under the same name alone.
    Returns the registry.
    """
    provideAdapter(persistentFieldAdapter)

    if registry is None:
        registry = queryUtility(IRegistry)
    if registry is None:
        registry = Registry()
    provideUtility(registry, IRegistry)
    registry.registerInterface(IPresenceSettings)

    for name, factory in BUILTIN_PRESETS.items():
        if queryUtility(IPresetFactory, name=name) is None:
            provideUtility(factory, IPresetFactory, name=name)

    return registry


def unregisterComponents():
    """Undo ``registerComponents()`` on the global site manager"""
    sm = getGlobalSiteManager()

    registry = sm.queryUtility(IRegistry)
    if registry is not None:
        sm.unregisterUtility(registry, IRegistry)

    for name, factory in BUILTIN_PRESETS.items():
        sm.unregisterUtility(factory, IPresetFactory, name=name)

    sm.unregisterAdapter(persistentFieldAdapter)
