"""
Lift catalog for hqdisk.
Handles loading named lift groups from external configuration and building lifts by name.
"""

import os
import json
import logging
from typing import Callable, Dict, List, Set

logger = logging.getLogger(__name__)

# Path to the catalog JSON file
CATALOG_FILE = os.path.join(os.path.dirname(__file__), 'lift_catalog.json')


def _fixed_builders() -> Dict[str, Callable]:
    from hqdisk.boundary_maps import make_example3, make_identity, make_smoothstep
    from hqdisk.cantor import phi_cantor
    return {
        "identity": make_identity,
        "example3": make_example3,
        "smoothstep": make_smoothstep,
        "phi_cantor": phi_cantor,
    }


def _parametrized_builders() -> Dict[str, Callable]:
    from hqdisk.boundary_maps import make_mobius, make_rotation
    from hqdisk.cantor import phi_n
    return {
        "phi_n": lambda arg: phi_n(int(arg)),
        "mobius": lambda arg: make_mobius(complex(arg)),
        "rotation": lambda arg: make_rotation(float(arg)),
    }


class LiftCatalog:
    """Named lifts and the groups they are organized in"""

    def __init__(self, catalog_file: str = CATALOG_FILE):
        self.catalog_file = catalog_file
        self.names_by_group: Dict[str, List[str]] = {}
        self.known_names: Set[str] = set()
        self._load_catalog()

    def _load_catalog(self) -> None:
        """Load lift groups from JSON file"""
        try:
            if not os.path.exists(self.catalog_file):
                logger.error(f"Lift catalog not found: {self.catalog_file}")
                return

            with open(self.catalog_file, 'r') as f:
                self.names_by_group = json.load(f)

            self.known_names = set()
            for group in self.names_by_group.values():
                self.known_names.update(group)

            logger.info(f"Loaded {len(self.known_names)} lift names from {self.catalog_file}")

        except Exception as e:
            logger.error(f"Error loading lift catalog: {str(e)}")
            self.names_by_group = {}
            self.known_names = set()

    def get_all_names(self) -> Set[str]:
        """Get the set of every name listed in some group"""
        return self.known_names

    def get_groups(self) -> List[str]:
        return list(self.names_by_group.keys())

    def get_names_in_group(self, group: str) -> List[str]:
        return self.names_by_group.get(group, [])

    def validate_name(self, name: str) -> bool:
        """Check that a name is buildable, whether or not a group lists it"""
        if name in _fixed_builders():
            return True
        prefix, sep, arg = name.partition(":")
        if not sep or prefix not in _parametrized_builders():
            return False
        try:
            self.build(name)
        except ValueError:
            return False
        return True

    def validate_names(self, names: List[str]) -> List[str]:
        """Filter list to only include buildable names"""
        return [name for name in names if self.validate_name(name)]

    def build(self, name: str):
        """Construct the LiftFunction a name refers to"""
        from hqdisk.errors import DomainError

        fixed = _fixed_builders()
        if name in fixed:
            return fixed[name]()
        prefix, sep, arg = name.partition(":")
        builders = _parametrized_builders()
        if not sep or prefix not in builders:
            raise DomainError(f"unknown lift name {name!r}")
        try:
            return builders[prefix](arg.strip())
        except DomainError:
            raise
        except ValueError:
            raise DomainError(f"malformed parameter in lift name {name!r}")

    def build_group(self, group: str) -> list:
        return [self.build(name) for name in self.get_names_in_group(group)]


# Singleton instance for easy import
lift_catalog = LiftCatalog()
