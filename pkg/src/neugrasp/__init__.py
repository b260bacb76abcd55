"""NeuGrasp: background-prior neural implicit surface reconstruction feeding a
volumetric 6-DoF grasp detector, with a synthetic scene generator, analytic
grasp oracle, and an evaluation harness."""

__version__ = "0.1.0"
