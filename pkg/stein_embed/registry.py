"""
Named-component registry for extensibility.

Central registry where modules register factories for test functions,
kernel models and base laws. Several factories may share a name within a
kind; lookups return the one with the lowest priority number.
"""

from typing import Any, Callable, Dict, List
import logging

logger = logging.getLogger(__name__)


class Registry:
    """
    Central registry of named components.

    Uses singleton pattern to ensure single global registry.
    Entries are grouped by kind (see the constants at the bottom of this module).
    """

    _instance = None
    _entries: Dict[str, List[Dict[str, Any]]] = {}

    def __new__(cls):
        """Ensure singleton pattern"""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._entries = {}
        return cls._instance

    def register(self, kind: str, name: str, factory: Callable,
                 priority: int = 10, **metadata):
        """
        Register a component factory.

        Args:
            kind: Component kind (e.g., TEST_FUNCTION)
            name: Lookup name (e.g., 'cos111')
            factory: Callable building the component
            priority: Lower number = preferred when names collide (default 10)
            **metadata: Additional metadata for filtering (e.g., finite_support=True)
        """
        entries = self._entries.setdefault(kind, [])

        if any(e['name'] == name and e['factory'] is factory for e in entries):
            logger.debug(f"{kind}/{name} already registered, skipping duplicate")
            return

        entries.append({
            'name': name,
            'factory': factory,
            'priority': priority,
            'metadata': metadata,
        })
        entries.sort(key=lambda e: e['priority'])

        logger.debug(f"Registered {kind}: {name} (priority={priority})")

    def unregister(self, kind: str, name: str):
        """
        Remove every factory registered under a name.

        Args:
            kind: Component kind
            name: Lookup name
        """
        if kind in self._entries:
            before = len(self._entries[kind])
            self._entries[kind] = [e for e in self._entries[kind] if e['name'] != name]
            if before > len(self._entries[kind]):
                logger.debug(f"Unregistered {kind}: {name}")

    def names(self, kind: str, **filters) -> List[str]:
        """
        Registered names of a kind, optionally filtered by metadata.

        Returns:
            Sorted, de-duplicated list of names
        """
        found = set()
        for entry in self._entries.get(kind, []):
            if filters and not all(entry['metadata'].get(k) == v for k, v in filters.items()):
                continue
            found.add(entry['name'])
        return sorted(found)

    def get(self, kind: str, name: str, *args, **kwargs) -> Any:
        """
        Build the preferred component registered under a name.

        Args:
            kind: Component kind
            name: Lookup name
            *args, **kwargs: Passed to the factory

        Raises:
            KeyError: nothing registered under that name
        """
        for entry in self._entries.get(kind, []):
            if entry['name'] == name:
                return entry['factory'](*args, **kwargs)
        known = ', '.join(self.names(kind)) or 'none'
        raise KeyError(f"unknown {kind} '{name}' (registered: {known})")

    def metadata(self, kind: str, name: str) -> Dict[str, Any]:
        for entry in self._entries.get(kind, []):
            if entry['name'] == name:
                return dict(entry['metadata'])
        raise KeyError(f"unknown {kind} '{name}'")


# Global singleton instance
registry = Registry()


def register(kind: str, name: str, priority: int = 10, **metadata):
    """
    Decorator for registering component factories.

    Usage:
        @register(TEST_FUNCTION, 'cos111', min_dim=3)
        def cos111():
            return CosineTestFunction('cos111', [1, 1, 1])

    Args:
        kind: Component kind
        name: Lookup name
        priority: Lower = preferred
        **metadata: Metadata for filtering
    """
    def decorator(func: Callable) -> Callable:
        registry.register(kind, name, func, priority, **metadata)
        return func

    return decorator


# ============================================================================
# Component kinds
# ============================================================================

TEST_FUNCTION = 'test_function'
"""
Smooth test functions with certified derivative bounds.

Factory returns an mc.testfunctions.TestFunction.
Metadata: min_dim (smallest dimension the function accepts)
"""

KERNEL_MODEL = 'kernel_model'
"""
U-statistic kernels.

Factory returns a ustats.kernels.KernelModel.
Metadata: d (kernel order), finite_support (bool)
"""

BASE_LAW = 'base_law'
"""
Mean-zero coordinate laws for chaos sums.

Factory returns a chaos.laws.BaseLaw.
"""
