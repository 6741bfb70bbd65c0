import graphviz

# Fill colours per layer kind for the DOT rendering
KIND_COLORS = {
    'conv1d': 'lightyellow',
    'rnn': 'lightgreen',
    'lstm': 'lightgreen',
    'gru': 'lightgreen',
    'encoder': 'lightblue',
    'attention': 'lightblue',
    'ffn': 'lightblue',
    'norm': 'lightgray',
    'dropout': 'lightgray',
    'pool': 'lightpink',
    'dense': 'lightpink',
}


def _layer_shapes(model):
    """Output shape of every top-level layer for a batch of one window"""
    shape = (1, model.window_length, 1)
    shapes = []
    for layer in model.layers:
        shape = layer.output_shape(shape)
        shapes.append(shape)
    return shapes


def _label(layer, shape=None):
    label = f"{layer.name} ({layer.kind})"
    if shape is not None:
        label += f" -> {list(shape[1:])}"
    count = layer.num_parameters()
    if count:
        label += f" [{count} params]"
    return label


def format_architecture_ascii(model):
    """
    Format the layer stack as an ASCII tree, sublayers nested under their block
    """
    lines = [f"{model.architecture} (L={model.window_length}, "
             f"{model.num_parameters()} parameters)"]

    def build_lines(layer, prefix, is_last, shape=None):
        connector = "└── " if is_last else "├── "
        lines.append(prefix + connector + _label(layer, shape))
        extension = "    " if is_last else "│   "
        for i, child in enumerate(layer.sublayers):
            build_lines(child, prefix + extension, i == len(layer.sublayers) - 1)

    shapes = _layer_shapes(model)
    for i, (layer, shape) in enumerate(zip(model.layers, shapes)):
        build_lines(layer, "", i == len(model.layers) - 1, shape)

    return "\n".join(lines)


def generate_parameter_statistics(model):
    """
    Parameter counts per top-level layer plus totals
    """
    per_layer = {layer.name: layer.num_parameters() for layer in model.layers}
    tensors = model.parameters()
    return {
        'architecture': model.architecture,
        'window_length': model.window_length,
        'total_parameters': model.num_parameters(),
        'parameter_tensors': len(tensors),
        'per_layer': per_layer,
        'largest_tensor': max(tensors, key=lambda name: tensors[name].size) if tensors else None,
    }


def architecture_to_graphviz(model):
    """
    Generate Graphviz DOT source for the layer stack (no rendering)
    """
    dot = graphviz.Digraph('ForecastModel')
    dot.attr('node', shape='box', style='rounded,filled', fillcolor='lightblue')
    dot.attr('edge', arrowsize='0.5')

    dot.node('input', f"input [{model.window_length}, 1]", fillcolor='white')
    previous = 'input'
    for layer, shape in zip(model.layers, _layer_shapes(model)):
        if layer.sublayers:
            with dot.subgraph(name=f"cluster_{layer.name}") as cluster:
                cluster.attr(label=_label(layer, shape), style='rounded')
                inner_previous = None
                for child in layer.sublayers:
                    node_id = f"{layer.name}.{child.name}"
                    cluster.node(node_id, _label(child),
                                 fillcolor=KIND_COLORS.get(child.kind, 'lightblue'))
                    dot.edge(inner_previous or previous, node_id)
                    inner_previous = node_id
            previous = inner_previous
        else:
            dot.node(layer.name, _label(layer, shape),
                     fillcolor=KIND_COLORS.get(layer.kind, 'lightblue'))
            dot.edge(previous, layer.name)
            previous = layer.name

    return dot.source
