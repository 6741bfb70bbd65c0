from .tensor import (Tensor, as_tensor, matmul, softmax_last_axis, elementwise,
                     reduce_mean, relu, sigmoid, tanh, ACTIVATIONS)
from .gradcheck import (numeric_gradient, check_gradients, relative_errors,
                        GradCheckReport)

__all__ = ['Tensor', 'as_tensor', 'matmul', 'softmax_last_axis', 'elementwise',
           'reduce_mean', 'relu', 'sigmoid', 'tanh', 'ACTIVATIONS',
           'numeric_gradient', 'check_gradients', 'relative_errors', 'GradCheckReport']
