from collections.abc import Callable, Sequence
from typing import Optional
import numpy as np
from numpy.typing import ArrayLike, NDArray
from .autograd_exceptions import NonScalarLossException

# maps the upstream gradient to one gradient per parent (None where a parent needs none)
BackwardRule = Callable[[NDArray[np.float64]], Sequence[Optional[NDArray[np.float64]]]]


class Tensor:
    """Dense float64 array that records how it was computed, for reverse-mode
    differentiation.

    Leaves created with `requires_grad=True` own a `grad` array of the same shape that
    starts at zero and accumulates across backward passes until `zero_grad` is called.
    Intermediate results never store gradients.

    :param data: Values
    :type data: ArrayLike
    :param requires_grad: Whether gradients should be tracked for this leaf
    :type requires_grad: bool
    """

    __slots__ = "_data", "_requires_grad", "grad", "_parents", "_backward", "_op"

    def __init__(self, data: ArrayLike, requires_grad: bool = False):
        self._data = np.array(data, dtype=np.float64)
        self._requires_grad = requires_grad
        self.grad = np.zeros_like(self._data) if requires_grad else None
        self._parents: tuple["Tensor", ...] = ()
        self._backward: Optional[BackwardRule] = None
        self._op = "leaf"

    @classmethod
    def from_op(cls, data: NDArray[np.float64], op: str, parents: Sequence["Tensor"],
                backward: BackwardRule) -> "Tensor":
        """Result of an operation. The graph edge is only recorded when some parent
        requires gradients.
        """

        out = cls.__new__(cls)
        out._data = data
        out.grad = None
        out._op = op
        if any(parent.requires_grad for parent in parents):
            out._requires_grad = True
            out._parents = tuple(parents)
            out._backward = backward
        else:
            out._requires_grad = False
            out._parents = ()
            out._backward = None
        return out

    def __repr__(self):
        return (f"Tensor(shape={self.shape!r}, op={self._op!r}, "
                f"requires_grad={self._requires_grad!r})")

    def __str__(self):
        return (
            f"--- Tensor ---\n"
            f"  Shape:    {self.shape}\n"
            f"  Op:       {self._op}\n"
            f"  Tracked:  {self._requires_grad}"
        )

    @property
    def data(self) -> NDArray[np.float64]:
        return self._data

    @data.setter
    def data(self, values: ArrayLike) -> None:
        values = np.asarray(values, dtype=np.float64)
        if values.shape != self._data.shape:
            raise ValueError(f"Parameter 'values' must have shape {self._data.shape}, got {values.shape}.")
        self._data = values

    @property
    def shape(self) -> tuple[int, ...]:
        return self._data.shape

    @property
    def requires_grad(self) -> bool:
        return self._requires_grad

    @property
    def is_leaf(self) -> bool:
        return self._backward is None

    @property
    def op(self) -> str:
        return self._op

    @property
    def parents(self) -> tuple["Tensor", ...]:
        return self._parents

    def item(self) -> float:
        if self._data.size != 1:
            raise ValueError(f"item() needs a single-element tensor, got shape {self.shape}")
        return float(self._data.reshape(-1)[0])

    def detach(self) -> "Tensor":
        return Tensor(self._data)

    def zero_grad(self) -> None:
        if self._requires_grad and self.is_leaf:
            self.grad = np.zeros_like(self._data)

    def backward(self) -> None:
        """Backpropagates from this scalar tensor into every tracked leaf.
        """

        backward(Graph.from_output(self), self)

    def __add__(self, other):
        from .ops import add
        return add(self, other)

    def __radd__(self, other):
        from .ops import add
        return add(other, self)

    def __sub__(self, other):
        from .ops import sub
        return sub(self, other)

    def __rsub__(self, other):
        from .ops import sub
        return sub(other, self)

    def __mul__(self, other):
        from .ops import mul, scalar_mul
        if isinstance(other, (int, float)):
            return scalar_mul(self, other)
        return mul(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __neg__(self):
        from .ops import scalar_mul
        return scalar_mul(self, -1.0)


def as_tensor(value: "Tensor | ArrayLike") -> Tensor:
    """Wraps constants as untracked tensors and passes tensors through.
    """

    return value if isinstance(value, Tensor) else Tensor(value)


class Graph:
    """Topologically ordered nodes reachable from an output; every node comes after
    all of its inputs.

    :param nodes: Nodes in topological order
    :type nodes: Sequence[Tensor]
    """

    __slots__ = "_nodes",

    def __init__(self, nodes: Sequence[Tensor]):
        self._nodes = tuple(nodes)

    def __repr__(self):
        return f"Graph(nodes={len(self._nodes)})"

    def __len__(self):
        return len(self._nodes)

    @property
    def nodes(self) -> tuple[Tensor, ...]:
        return self._nodes

    @property
    def output(self) -> Tensor:
        return self._nodes[-1]

    @classmethod
    def from_output(cls, output: Tensor) -> "Graph":
        """Collects the tracked subgraph behind `output` by an iterative depth-first search
        (deep networks would overflow the recursion limit).
        """

        order: list[Tensor] = []
        visited: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(output, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node.parents:
                if id(parent) not in visited:
                    stack.append((parent, False))
        return cls(order)


def backward(graph: Graph, loss: Tensor) -> None:
    """Accumulates dLoss/dLeaf into the `grad` of every tracked leaf of the graph. Each
    node's backward rule runs exactly once.

    :param graph: Graph built from `loss`
    :type graph: Graph
    :param loss: Scalar output
    :type loss: Tensor
    """

    if loss.data.size != 1:
        raise NonScalarLossException(loss.shape)
    if not loss.requires_grad:
        return
    pending: dict[int, NDArray[np.float64]] = {id(loss): np.ones_like(loss.data)}
    for node in reversed(graph.nodes):
        upstream = pending.pop(id(node), None)
        if upstream is None:
            continue
        if node.is_leaf:
            node.grad = upstream if node.grad is None else node.grad + upstream
            continue
        for parent, grad in zip(node.parents, node._backward(upstream)):
            if grad is None or not parent.requires_grad:
                continue
            key = id(parent)
            pending[key] = grad if key not in pending else pending[key] + grad
