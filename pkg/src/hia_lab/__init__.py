"""hia-lab - Hardware-trojan inference lab for CNN accelerators.

This package provides tools for:
- Running LeNet-style CNNs on a small inference engine with a fixed
  element-production order
- Designing stealthy triggers from validation-set feature-map statistics
- Arming channel-shuffle payloads and evaluating their effect and overhead

Modules:
    core: Tensors, channel permutations and the changed-fraction metric
    engine: Layers, networks, triggered execution and op counters
    trojan: Trigger/payload records and offline trigger design
    models: LeNet / LeNet-3D builders, fixtures, motivational experiment
    dataio: Dataset readers, weight container, config and report files
    evaluation: Evaluation, overhead and experiment runners
"""

__version__ = "0.1.0"
__all__ = ["__version__"]
