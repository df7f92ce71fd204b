import pytest

from mmdboot.datasets import load_counts, load_matrix


@pytest.fixture(scope="session")
def good_counts():
    return load_counts("artificial_good")


@pytest.fixture(scope="session")
def poor_counts():
    return load_counts("artificial_poor")


@pytest.fixture(scope="session")
def basin_counts():
    return load_counts("basin_of_mexico")


@pytest.fixture(scope="session")
def published():
    """(plain, bootstrapped) published matrices per dataset."""
    names = ("artificial_good", "artificial_poor", "basin_of_mexico")
    return {n: (load_matrix(n), load_matrix(n, bootstrapped=True)) for n in names}


XICO_INDIVIDUALS = """\
population,individual,MetopicSuture,SupraorbitalStructures,InfraorbitalSuture,MultipleInfraorbitalForamina,ZygomaticoFacialForamina,ParietalForamen,CondylarCanal,DividedHypoglossalCanal,ForamenOvaleIncomplete,ForamenSpinosumIncomplete,TympanicDehiscence,AuditoryExostosis,MastoidForamen
Epiclassic Xico,x1,0,1,1,0,1,1,1,0,1,1,1,1,1
Epiclassic Xico,x2,0,1,1,0,1,1,1,0,1,1,1,0,0
Epiclassic Xico,x3,0,1,1,0,0,1,1,0,?,0,1,0,0
Epiclassic Xico,x4,0,1,1,0,0,1,?,0,0,?,1,0,0
Epiclassic Xico,x5,0,1,0,0,0,1,0,?,?,0,0,0,0
Other,o1,1,0,0,1,1,0,0,1,1,1,0,1,1
"""


@pytest.fixture
def xico_individuals():
    return XICO_INDIVIDUALS
