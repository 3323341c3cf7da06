"""
Marshmallow schemas for the JSON reports.

Complex numbers are written as ``[re, im]`` pairs, real-mode matrices
as plain floats, real sign sequences as strings like ``"++-+"`` and
complex sign sequences as lists of quadrant strings, where ``"-+"``
stands for ``-1+j``.
"""

import json
from marshmallow import Schema, fields
from .estimator import REAL
from .signs import SignSequence

__all__ = [
    'CorrMatrixSchema',
    'PsdReportSchema',
    'StripModelSchema',
    'WitnessSchema',
    'EnumerationSummarySchema',
    'McReportSchema',
    'BenchmarkSchema',
    'complex_pair',
    'dump_sequence',
    'dumps',
]


def complex_pair(value):
    value = complex(value)
    return [value.real, value.imag]


def _scalar(value):
    return complex_pair(value) if isinstance(value, complex) else float(value)


def dump_sequence(seq):
    if isinstance(seq, SignSequence):
        return str(seq)
    return seq.quadrants()


class CorrMatrixSchema(Schema):
    p = fields.Integer()
    mode = fields.String()
    entries = fields.Method('dump_entries')

    def dump_entries(self, obj):
        if obj.mode == REAL:
            return [[float(v) for v in row] for row in obj.entries.real.tolist()]
        return [[complex_pair(v) for v in row] for row in obj.entries.tolist()]


class PsdReportSchema(Schema):
    eigenvalues = fields.List(fields.Float())
    min_eig = fields.Float()
    is_psd = fields.Boolean()
    tolerance = fields.Float()


class StripModelSchema(Schema):
    a = fields.List(fields.Float())
    reordered = fields.Method('dump_reordered')
    order = fields.List(fields.Integer())
    flips = fields.List(fields.Boolean())

    def dump_reordered(self, obj):
        return [dump_sequence(s) for s in obj.reordered]


class WitnessSchema(Schema):
    index = fields.Integer()
    sequences = fields.Method('dump_sequences')
    matrix = fields.Nested(CorrMatrixSchema)
    eigenvalues = fields.List(fields.Float())

    def dump_sequences(self, obj):
        return [dump_sequence(s) for s in obj.sequences]


class EnumerationSummarySchema(Schema):
    p = fields.Integer()
    n = fields.Integer()
    mode = fields.String()
    symmetry_reduce = fields.Boolean()
    tolerance = fields.Float()
    total_configs = fields.Integer()
    violations = fields.Integer()
    min_min_eig = fields.Float()
    witnesses = fields.List(fields.Nested(WitnessSchema))


class McReportSchema(Schema):
    mode = fields.String()
    target = fields.Method('dump_target')
    n_samples = fields.Integer()
    seed = fields.Integer()
    df = fields.Float(allow_none=True)
    empirical_sign_moment = fields.Method('dump_empirical')
    predicted_sign_moment = fields.Method('dump_predicted')
    recovered = fields.Method('dump_recovered')
    abs_error = fields.Float()
    tolerance = fields.Float()
    passed = fields.Boolean(data_key='pass')

    def dump_target(self, obj):
        return _scalar(obj.target)

    def dump_empirical(self, obj):
        return _scalar(obj.empirical_sign_moment)

    def dump_predicted(self, obj):
        return _scalar(obj.predicted_sign_moment)

    def dump_recovered(self, obj):
        return _scalar(obj.recovered)


class BenchmarkSchema(Schema):
    n = fields.Integer()
    repeat = fields.Integer()
    kernel_seconds = fields.Float()
    naive_seconds = fields.Float()
    kernel_samples_per_second = fields.Float()
    naive_samples_per_second = fields.Float()
    speedup = fields.Float()


def dumps(data):
    """Render already dumped data as byte-stable JSON."""

    return json.dumps(data, sort_keys=True, indent=2)
