"""Library modules: interval values, proximity measures, relations, dependencies,
inference and decomposition."""
