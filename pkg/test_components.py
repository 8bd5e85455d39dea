#!/usr/bin/env python3
"""
Smoke test script for trace-rearrange components.
Runs under pytest or directly: python test_components.py
"""

import sys
import os
sys.path.insert(0, os.path.dirname(__file__))

def test_config_manager():
    """Test configuration management."""
    print("Testing ConfigManager...")
    from trace_rearrange.config_manager import ConfigManager
    from trace_rearrange.errors import ConfigError
    import tempfile

    config = ConfigManager().load()

    assert config.verify.samples == 500
    assert config.verify.dims == [2, 3, 4, 5, 6]
    assert config.tolerances.verdict == 1e-8
    assert config.quadrature.panels == 256

    # YAML round trip with a partial document
    temp_dir = tempfile.mkdtemp()
    path = os.path.join(temp_dir, 'config.yaml')
    with open(path, 'w') as f:
        f.write("verify:\n  samples: 20\n  dims: [3]\ntolerances:\n  verdict: 1e-6\n")
    config = ConfigManager(path).load()
    assert config.verify.samples == 20
    assert config.verify.dims == [3]
    assert config.tolerances.verdict == 1e-6
    assert config.hunt.restarts == 50

    # Errors are reported, not replaced by defaults
    with open(path, 'w') as f:
        f.write("verify:\n  samples: many\n")
    try:
        ConfigManager(path).load()
        raise AssertionError("expected ConfigError")
    except ConfigError as e:
        assert "verify.samples" in str(e)

    with open(path, 'w') as f:
        f.write("quadrature:\n  panels: 2\n")
    try:
        ConfigManager(path).load()
        raise AssertionError("expected ConfigError")
    except ConfigError as e:
        assert "quadrature.panels" in str(e)

    # Save and reload
    saved = ConfigManager().save(os.path.join(temp_dir, 'saved.json'))
    assert ConfigManager(saved).load().reporting.results_log == "hunts.ndjson"

    import shutil
    shutil.rmtree(temp_dir)

    print("  ✓ ConfigManager working")

def test_matrix_io():
    """Test the matrix and witness JSON formats."""
    print("Testing matrix I/O...")
    import numpy as np
    from trace_rearrange.errors import CorruptWitness, MatrixFormatError
    from trace_rearrange.matrix_io import (
        load_matrix, make_witness, matrix_from_json, matrix_to_json, read_witness, save_matrix,
    )
    import tempfile

    M = np.array([[1.0, 2 - 1j], [2 + 1j, 0.5]])
    doc = matrix_to_json(M)
    assert doc['dim'] == 2
    assert doc['entries'][0][1] == [2.0, -1.0]
    assert np.array_equal(matrix_from_json(doc), M)

    # Non-square input is rejected
    try:
        matrix_from_json({'dim': 2, 'entries': [[[1, 0], [0, 0]], [[0, 0]]]})
        raise AssertionError("expected MatrixFormatError")
    except MatrixFormatError:
        pass

    temp_dir = tempfile.mkdtemp()
    path = save_matrix(M, os.path.join(temp_dir, 'm.json'))
    assert np.array_equal(load_matrix(path), M)

    # Witness digest covers structure, not values
    witness = make_witness({'A': M, 'B': np.eye(2)}, {'p': 1.5})
    decoded = read_witness(witness, ['p'])
    assert np.array_equal(decoded['A'], M)
    try:
        read_witness(witness, ['p', 'q'])
        raise AssertionError("expected CorruptWitness")
    except CorruptWitness:
        pass

    import shutil
    shutil.rmtree(temp_dir)

    print("  ✓ Matrix I/O working")

def test_registry():
    """Test the inequality registry."""
    print("Testing InequalityRegistry...")
    from trace_rearrange.registry import get_registry

    registry = get_registry()
    assert len(registry.ids()) == 16

    entry = registry.get('updown2')
    assert entry.params == ['r', 's']
    assert entry.inputs == ['A', 'B']

    print("  ✓ InequalityRegistry working")

def test_suite_catalog():
    """Test suite catalog loading."""
    print("Testing SuiteCatalog...")
    from trace_rearrange.suites import get_suite_catalog

    catalog = get_suite_catalog()
    assert len(catalog.names()) == 12
    assert catalog.index('theorem1') == 0

    check = catalog.get('lemma-otherway').checks[1]
    assert check.equality_tol == 1e-8
    assert not check.overridable
    assert check.with_overrides({'p': [1.5]}).params == {'p': [2.0]}

    print("  ✓ SuiteCatalog working")

def test_reporter():
    """Test results files and manifests."""
    print("Testing Reporter...")
    from trace_rearrange.reporter import (
        ResultsWriter, RunManifest, json_safe, manifest_path, to_json_line,
    )
    import numpy as np
    import tempfile
    import json

    temp_dir = tempfile.mkdtemp()
    path = os.path.join(temp_dir, 'run.ndjson')

    assert json_safe({'a': np.float64(1.5), 'b': float('inf'), 'c': [np.int64(3)]}) == \
        {'a': 1.5, 'b': 'inf', 'c': [3]}
    assert to_json_line({'b': 1, 'a': float('nan')}) == '{"a": "nan", "b": 1}'

    with ResultsWriter(path) as writer:
        writer.write({'type': 'check', 'min_slack': 0.25})
        writer.write({'type': 'summary', 'exit_code': 0})
    assert writer.count == 2

    with open(path, 'r') as f:
        lines = [json.loads(line) for line in f]
    assert [line['type'] for line in lines] == ['check', 'summary']

    manifest = RunManifest(command='verify', results_path=path, overrides={'suite': 'all'})
    written = manifest.write()
    assert written == str(manifest_path(path))
    with open(written, 'r') as f:
        restored = RunManifest.from_dict(json.load(f))
    assert restored.overrides == {'suite': 'all'}
    assert restored.started_at == manifest.started_at

    import shutil
    shutil.rmtree(temp_dir)

    print("  ✓ Reporter working")

def main():
    """Run all tests."""
    print("=" * 50)
    print("trace-rearrange - Component Tests")
    print("=" * 50)
    print()

    tests = [
        test_config_manager,
        test_matrix_io,
        test_registry,
        test_suite_catalog,
        test_reporter,
    ]

    failed = []

    for test in tests:
        try:
            test()
        except Exception as e:
            print(f"  ✗ {test.__name__} FAILED: {str(e)}")
            failed.append((test.__name__, str(e)))

    print()
    print("=" * 50)

    if not failed:
        print("✅ All tests passed!")
        print("=" * 50)
        return 0
    else:
        print(f"❌ {len(failed)} test(s) failed:")
        for name, error in failed:
            print(f"  - {name}: {error}")
        print("=" * 50)
        return 1

if __name__ == '__main__':
    sys.exit(main())
