"""
Chart-tagged elements and the induced map on the blown-up space
"""
import pytest

from app.exceptions import DirectionDependent, UnsupportedConfiguration
from app.models.orbit import ChartId
from app.models.parameters import MapParameters
from app.services.atlas_service import ATLAS_P3, AtlasService


@pytest.fixture
def atlas(config):
    return AtlasService(config)


@pytest.fixture
def shifted(birmap):
    """Normal form with beta0 = 1, alpha2 = -1"""
    params = MapParameters.of((2, 0, -1, 1), (1, 1, 0, 0))
    return params, birmap.build_family_map(params)


def test_chart_labels():
    assert ChartId('S03').is_line_divisor
    assert ChartId('E1').is_point_divisor
    with pytest.raises(ValueError):
        ChartId('E7')


def test_chart_coordinates_roundtrip(atlas):
    assert atlas.chart_coordinates(atlas.from_chart('E3', (2, 5))) == [2, 5]
    assert atlas.chart_coordinates(atlas.from_chart('S01', (-1, 7))) == [-1, 7]
    assert atlas.chart_coordinates(atlas.from_chart('S03', (4, 3))) == [4, 3]
    with pytest.raises(UnsupportedConfiguration):
        atlas.from_chart('P3', (1, 1))


def test_regular_point_maps_pointwise(atlas, birmap, load):
    f = birmap.build_family_map(load('lyness'))
    image = atlas.apply_fY(f, atlas.p3_element([1, 2, 3, 4]))
    assert image.chart.label == 'P3'
    assert atlas.equals_point(image, [2, 6, 8, 10])


def test_e3_divisor_lands_on_line_divisor(atlas, birmap, load):
    f = birmap.build_family_map(load('period8_lyness'))
    image = atlas.apply_fY(f, atlas.from_chart('E3', (2, 3)))
    assert image.chart.label == 'S01'
    # (a, b) -> (b, beta0 + a) with beta0 = 0
    assert atlas.chart_coordinates(image) == [3, 2]


def test_line_divisor_leaves_the_centers(atlas, shifted):
    _, f = shifted
    image = atlas.apply_fY(f, atlas.from_chart('S01', (3, 2)))
    assert image.chart.label == 'P3'
    assert atlas.equals_point(image, [0, 8, 4, -1])


def test_sigma_beta_contracts_to_e3(atlas, shifted):
    _, f = shifted
    image = atlas.apply_fY(f, atlas.p3_element([1, -1, 3, 4]))
    assert image.chart.label == 'E3'
    assert atlas.chart_coordinates(image) == [3, 4]


def test_e1_without_blowup_is_direction_dependent(atlas, birmap, load):
    f = birmap.build_family_map(load('lyness'))
    with pytest.raises(DirectionDependent):
        atlas.apply_fY(f, atlas.p3_element([0, 1, 0, 0]), ATLAS_P3)


def test_containment_and_loci(atlas):
    line = atlas.line_element((0, 0, 1, 0), (1, 0, 0, 0))
    assert atlas.contains(line, atlas.p3_element([3, 0, 1, 0]))
    assert not atlas.contains(line, atlas.p3_element([1, 1, 1, 0]))
    assert atlas.same_locus(line, atlas.line_element((1, 0, 1, 0), (2, 0, 0, 0)))
    assert not atlas.contains(line, atlas.from_chart('E3', (0, 0)))


def test_plane_predicates(atlas, birmap, load):
    plane = atlas.plane_element(((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)))
    assert plane.kind == 'Surface'
    assert atlas.satisfies(plane, (0, 0, 0, 1))
    assert not atlas.satisfies(plane, (1, 0, 0, 0))
    f = birmap.build_family_map(load('lyness'))
    assert atlas.point_in(f, atlas.p3_element([0, 1, 0, 0]))
    assert not atlas.point_in(f, atlas.p3_element([1, 1, 1, 1]))
