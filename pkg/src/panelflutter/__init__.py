"""Free-vibration and supersonic flutter analysis of laminated composite
flat panels: hierarchical thickness kinematics, field-consistent QUAD-4
elements, piston-theory aerodynamics and eigenvalue-coalescence tracking."""

__version__ = "0.1.0"

from .assembly import GlobalSystem, apply_bc, assemble
from .config import RunConfig, parse_config
from .eigen import (ModalBasis, Spectrum, damped_spectrum, flutter_spectrum,
                    free_vibration, reduced_flutter_spectrum)
from .fem import Mesh, build_structured_mesh
from .flutter import (FlutterResult, NonDim, find_flutter_damped,
                      find_flutter_undamped, parametric_sweep)
from .kinematics import TheoryExpansion, make_expansion
from .laminate import (ConstitutivePartition, Laminate, OrthotropicMaterial,
                       Ply, build_3d_stiffness, rotate_partition,
                       thickness_integral)

__all__ = [
    "GlobalSystem", "apply_bc", "assemble",
    "RunConfig", "parse_config",
    "ModalBasis", "Spectrum", "damped_spectrum", "flutter_spectrum",
    "free_vibration", "reduced_flutter_spectrum",
    "Mesh", "build_structured_mesh",
    "FlutterResult", "NonDim", "find_flutter_damped",
    "find_flutter_undamped", "parametric_sweep",
    "TheoryExpansion", "make_expansion",
    "ConstitutivePartition", "Laminate", "OrthotropicMaterial", "Ply",
    "build_3d_stiffness", "rotate_partition", "thickness_integral",
]
