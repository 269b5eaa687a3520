from collections import namedtuple
from errorClasses.errors import ConfigurationError
from materialClasses.material import MaterialParams
from meshClasses.mesh import Mesh
import numpy as np

NORMAL = (0.0, 0.0, 1.0)
OBLIQUE_ANGLE = np.pi / 6

# Axis-aligned box; element loads may target the triangles whose centroid lies inside
Region = namedtuple('Region', 'xmin xmax ymin ymax')


def oblique_direction(angle_to_normal:float) -> tuple:
    """
    Unit vector tilted from +z by angle_to_normal inside the x-z plane.
    """
    return (float(np.sin(angle_to_normal)), 0.0, float(np.cos(angle_to_normal)))


def distributed_b(x, y, b0:float, L:float, support_radius:float = None):
    """
    b0 cos^2(r) with r = pi / (2L) * |(x, y) - (L/2, L/2)|, zero where r > support_radius.
    r is dimensionless; support_radius defaults to the numeric value of L.
    """
    if L <= 0:
        raise ValueError(f"L should be positive, got {L}")
    if support_radius is None:
        support_radius = L

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = np.pi / (2 * L) * np.hypot(x - L / 2, y - L / 2)
    return np.where(r <= support_radius, b0 * np.cos(r) ** 2, 0.0)


def elementwise_load(mesh:Mesh, field) -> np.ndarray:
    """
    field(x, y) evaluated at every triangle centroid: one uniform value per element.
    """
    centroids = mesh.centroids()
    return np.asarray(field(centroids[:, 0], centroids[:, 1]), dtype=float) * np.ones(mesh.num_triangles)


class LoadSpec():
    """
    Force density b0 * direction (N/m^3), on over the closed window [t_start, t_end].

    kind 'element-uniform' loads the `target` triangles uniformly; kind 'distributed-cos2'
    spreads b0 over the membrane with distributed_b of size L.
    """

    KINDS = ('element-uniform', 'distributed-cos2')
    UNIT_TOLERANCE = 1e-9

    def __init__(self, kind:str, direction, b0:float, window:tuple, target=(), L:float = None, support_radius:float = None):
        if kind not in LoadSpec.KINDS:
            raise ConfigurationError(f"load kind should be one of {LoadSpec.KINDS}, got {kind!r}", key='case.load.kind')

        direction = np.asarray(direction, dtype=float)
        if direction.shape != (3,) or abs(np.linalg.norm(direction) - 1) > LoadSpec.UNIT_TOLERANCE:
            raise ConfigurationError(f"load direction should be a unit 3-vector, got {direction.tolist()}",
                                     key='case.load.direction')

        t_start, t_end = (float(value) for value in window)
        if t_end < t_start:
            raise ConfigurationError(f"load window [{t_start}, {t_end}] ends before it starts", key='case.load.window')
        if not np.isfinite(b0):
            raise ConfigurationError("b0 should be finite", key='case.load.b0')

        if kind == 'element-uniform' and len(target) == 0:
            raise ConfigurationError("element-uniform load needs target elements", key='case.load.target')
        if kind == 'distributed-cos2' and (L is None or L <= 0):
            raise ConfigurationError("distributed load needs a positive membrane size L", key='case.load.L')

        self._kind = kind
        self._direction = tuple(direction / np.linalg.norm(direction))
        self._b0 = float(b0)
        self._window = (t_start, t_end)
        self._target = tuple(int(element) for element in target)
        self._L = None if L is None else float(L)
        self._support_radius = None if support_radius is None else float(support_radius)

    @property
    def kind(self):
        return self._kind

    @property
    def direction(self):
        return self._direction

    @property
    def b0(self):
        return self._b0

    @property
    def window(self):
        return self._window

    @property
    def target(self):
        return self._target

    @property
    def L(self):
        return self._L

    @property
    def support_radius(self):
        return self._support_radius

    def element_b(self, mesh:Mesh) -> np.ndarray:
        """
        (E, 3) force density of every triangle
        """
        if self._kind == 'element-uniform':
            magnitudes = np.zeros(mesh.num_triangles)
            magnitudes[list(self._target)] = self._b0
        else:
            magnitudes = elementwise_load(mesh, lambda x, y: distributed_b(x, y, self._b0, self._L, self._support_radius))
        return magnitudes[:, None] * np.asarray(self._direction)

    def echo(self) -> dict:
        return {'kind': self._kind, 'direction': list(self._direction), 'b0': self._b0,
                'window': list(self._window), 'target': list(self._target),
                'L': self._L, 'support_radius': self._support_radius}


class StrikeSpec(namedtuple('StrikeSpec', 'node speed angle_to_normal')):
    """
    Node driven at constant velocity speed * (sin a, 0, cos a) from t = 0.
    """
    __slots__ = ()

    def __new__(cls, node:int, speed:float, angle_to_normal:float = 0.0):
        if speed < 0 or not np.isfinite(speed):
            raise ConfigurationError(f"strike speed should be non negative, got {speed}", key='case.strike.speed')
        return super().__new__(cls, int(node), float(speed), float(angle_to_normal))

    @property
    def velocity(self) -> np.ndarray:
        return self.speed * np.asarray(oblique_direction(self.angle_to_normal))

    def echo(self) -> dict:
        return {'node': self.node, 'speed': self.speed, 'angle_to_normal': self.angle_to_normal}


# Everything a numbered case needs besides the mesh. window None means the case default;
# load_region None targets the central element pair of the mesh being solved.
CaseParams = namedtuple('CaseParams', 'material T border tau beta1 beta2 b0 speed window support_radius '
                                      'load_region initial_displacement initial_velocity every_n_steps directory name')
CaseParams.__new__.__defaults__ = ('free', None, 0.5, 0.5, 1e8, 10.0, None, None, None,
                                   (0.0, 0.0, 0.0), (0.0, 0.0, 0.0), 10, None, 'scenario')


class ScenarioConfig():
    """
    A fully resolved run: mesh, material, loads and strikes bound to mesh entities.
    """

    BORDERS = ('free', 'fixed')

    def __init__(self, mesh:Mesh, material:MaterialParams, T:float, loads=(), strikes=(), border:str = 'free',
                 tau:float = None, beta1:float = 0.5, beta2:float = 0.5, initial_displacement=(0.0, 0.0, 0.0),
                 initial_velocity=(0.0, 0.0, 0.0), every_n_steps:int = 10, directory=None, name:str = 'scenario',
                 case_id:int = None):
        if not isinstance(mesh, Mesh):
            raise TypeError("mesh should be a Mesh!")
        if not isinstance(material, MaterialParams):
            raise TypeError("material should be MaterialParams!")
        if border not in ScenarioConfig.BORDERS:
            raise ConfigurationError(f"border should be one of {ScenarioConfig.BORDERS}, got {border!r}", key='border')
        if not np.isfinite(T) or T <= 0:
            raise ConfigurationError(f"T should be positive, got {T}", key='T')
        if tau is not None and (not np.isfinite(tau) or tau <= 0):
            raise ConfigurationError(f"tau should be positive, got {tau}", key='tau')
        if isinstance(every_n_steps, bool) or not isinstance(every_n_steps, int) or every_n_steps < 1:
            raise ConfigurationError(f"every_n_steps should be a positive int, got {every_n_steps!r}",
                                     key='output.every_n_steps')

        for load in loads:
            if not isinstance(load, LoadSpec):
                raise TypeError("loads should hold LoadSpec items")
            if any(not 0 <= element < mesh.num_triangles for element in load.target):
                raise ConfigurationError(f"load targets elements outside [0, {mesh.num_triangles})", key='case.load.target')
        for strike in strikes:
            if not isinstance(strike, StrikeSpec):
                raise TypeError("strikes should hold StrikeSpec items")
            if not 0 <= strike.node < mesh.num_nodes:
                raise ConfigurationError(f"strike node {strike.node} does not exist", key='case.strike.node')

        self.mesh = mesh
        self.material = material
        self.T = float(T)
        self.loads = tuple(loads)
        self.strikes = tuple(strikes)
        self.border = border
        self.tau = None if tau is None else float(tau)
        self.beta1 = beta1
        self.beta2 = beta2
        self.initial_displacement = self._vector3(initial_displacement, 'initial.displacement')
        self.initial_velocity = self._vector3(initial_velocity, 'initial.velocity')
        self.every_n_steps = every_n_steps
        self.directory = directory
        self.name = name
        self.case_id = case_id

    def _vector3(self, value, key:str) -> tuple:
        vector = np.asarray(value, dtype=float)
        if vector.shape != (3,) or not np.all(np.isfinite(vector)):
            raise ConfigurationError(f"{key} should be a finite 3-vector", key=key)
        return tuple(float(component) for component in vector)

    def echo(self) -> dict:
        spec = self.mesh.structure
        mesh_echo = {'num_nodes': self.mesh.num_nodes, 'num_triangles': self.mesh.num_triangles}
        if spec is not None:
            mesh_echo.update({'Lx': spec.Lx, 'Ly': spec.Ly, 'nx': spec.nx, 'ny': spec.ny})
        material = self.material
        return {
            'name': self.name,
            'case_id': self.case_id,
            'mesh': mesh_echo,
            'material': {'rho': material.rho, 'h': material.h, 'D': material.D.d.tolist(),
                         'strain_threshold': material.strain_threshold,
                         'stress_threshold': material.stress_threshold},
            'loads': [load.echo() for load in self.loads],
            'strikes': [strike.echo() for strike in self.strikes],
            'border': self.border,
            'T': self.T,
            'tau': self.tau,
            'newmark': {'beta1': self.beta1, 'beta2': self.beta2},
            'initial': {'displacement': list(self.initial_displacement), 'velocity': list(self.initial_velocity)},
            'output': {'every_n_steps': self.every_n_steps,
                       'directory': None if self.directory is None else str(self.directory)},
        }


def membrane_center(mesh:Mesh) -> tuple:
    if mesh.structure is not None:
        return (mesh.structure.Lx / 2, mesh.structure.Ly / 2)
    lower = mesh.coords.min(axis=0)
    upper = mesh.coords.max(axis=0)
    return tuple((lower + upper) / 2)


def membrane_size(mesh:Mesh) -> float:
    if mesh.structure is not None:
        return mesh.structure.Lx
    return float(np.ptp(mesh.coords[:, 0]))


def central_region(mesh:Mesh) -> Region:
    """
    Bounding box of the central element pair, used to keep a load region fixed under refinement.
    """
    corners = mesh.coords[mesh.triangles[list(mesh.central_element_pair())].ravel()]
    lower = corners.min(axis=0)
    upper = corners.max(axis=0)
    return Region(float(lower[0]), float(upper[0]), float(lower[1]), float(upper[1]))


def elements_in_region(mesh:Mesh, region:Region) -> tuple:
    centroids = mesh.centroids()
    inside = ((centroids[:, 0] > region.xmin) & (centroids[:, 0] < region.xmax)
              & (centroids[:, 1] > region.ymin) & (centroids[:, 1] < region.ymax))
    return tuple(int(element) for element in np.flatnonzero(inside))


def build_case(n:int, params:CaseParams, mesh:Mesh) -> ScenarioConfig:
    """
    The five test cases on `mesh`:
      1 normal load on the central element pair       2 same, tilted pi/6 in the x-z plane
      3 normal constant-speed strike at the center    4 same, tilted pi/6
      5 normal cos^2 distributed load over the membrane
    n None builds a case with no load, driven only by the initial fields.
    """
    if n is not None and n not in (1, 2, 3, 4, 5):
        raise ConfigurationError(f"case id should be in 1..5, got {n!r}", key='case.id')

    loads = list()
    strikes = list()
    if n in (1, 2):
        window = params.window if params.window is not None else (0.0, params.T / 10)
        if params.load_region is None:
            target = mesh.central_element_pair()
        else:
            target = elements_in_region(mesh, params.load_region)
        direction = NORMAL if n == 1 else oblique_direction(OBLIQUE_ANGLE)
        loads.append(LoadSpec('element-uniform', direction, params.b0, window, target=target))
    elif n in (3, 4):
        node = mesh.nearest_node(membrane_center(mesh))
        strikes.append(StrikeSpec(node, params.speed, 0.0 if n == 3 else OBLIQUE_ANGLE))
    elif n == 5:
        window = params.window if params.window is not None else (0.0, params.T)
        loads.append(LoadSpec('distributed-cos2', NORMAL, params.b0, window, L=membrane_size(mesh),
                              support_radius=params.support_radius))

    return ScenarioConfig(mesh, params.material, params.T, loads=loads, strikes=strikes, border=params.border,
                          tau=params.tau, beta1=params.beta1, beta2=params.beta2,
                          initial_displacement=params.initial_displacement, initial_velocity=params.initial_velocity,
                          every_n_steps=params.every_n_steps, directory=params.directory, name=params.name, case_id=n)
