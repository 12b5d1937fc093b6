from fermi_forge.geometry import Mesh, MetricFamily, metric_jets
from fermi_forge.pde_core import EllipticOperator, assemble_operator


def first_linearized_operator(
    family: MetricFamily, mesh: Mesh
) -> EllipticOperator:
    """
    The operator L = Delta_g + h1 / 2 of the first linearized equation at
    the zero graph, in weak form int d k(grad u, grad phi) + d h1 u phi / 2.
    On a minimal family it coincides with the Newton matrix at u = 0.
    """
    jets = metric_jets(family, mesh, at="quadrature")
    return assemble_operator(
        mesh, A=jets.k, d=jets.d, q=jets.h1 / 2, at_quadrature=True
    )
