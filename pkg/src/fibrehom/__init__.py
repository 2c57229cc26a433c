"""Cellular homology, cohomology and simple-homotopy invariants of
fibred CW-complexes with fibres in a finitely presented structure
category."""

from .catmodule import (AbPres, CatModule, FreeRightModule, constant_module,
                        hom_from_free, induced_chain_map, induced_cochain_map,
                        pullback_module, representable_module, sign_module,
                        tensor_free)
from .chains import (ChainMap, FreeChainComplex, ZPiMatrix, build_chain_complex,
                     chain_map_from_cellular, identity_chain_map, mapping_cone,
                     transport_complex, trivial_pi, trivialize_chain_map,
                     trivialize_complex, verify_chain_map, verify_d_squared)
from .fcomplex import (Attachment, FCell, FComplex, RowTerm, TrackItem,
                       elementary_expansion, klein_bottle, point, rp2, sphere,
                       torus, z2_point, z2_sphere)
from .fundamental import PiCategory, PiObject, build_pi, is_finite_pi
from .homology import (HomologyTable, ModuleValuedHomology, chain_setup,
                       cohomology, euler_characteristics, homology,
                       total_homology, whitehead_check)
from .intlinalg import (AbGroupPresentation, homology_of_pair,
                        homology_of_presented_pair, induced_on_homology,
                        smith_normal_form)
from .ktheory import (Domination, K0Representative, TorsionRepresentative,
                      check_torsion_algebra, find_chain_contraction,
                      finiteness_obstruction, reduce_trivial_pi,
                      torsion_of_contractible, torsion_of_equivalence)
from .presented import (FiniteGroup, PresentedCategory, orbit_category,
                        trivial_category, z2_orbit_category)
from .words import FormalSum, MorphismWord, compose

__version__ = "0.1.0"
