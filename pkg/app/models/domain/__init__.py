from app.models.domain.base import DomainModel, TypeSelector
from app.models.domain.cost import CostModel, CustomCost, QuadraticCost
from app.models.domain.risk import CustomRisk, LinearBreachRisk, NoRisk, RiskModel
from app.models.domain.spec import ModelSpec, PrivacyInterval, TypePair
from app.models.domain.utility import CustomUtility, LinearInTypeUtility, UtilityModel

__all__ = [
    "DomainModel",
    "TypeSelector",
    "CostModel",
    "CustomCost",
    "QuadraticCost",
    "CustomRisk",
    "LinearBreachRisk",
    "NoRisk",
    "RiskModel",
    "ModelSpec",
    "PrivacyInterval",
    "TypePair",
    "CustomUtility",
    "LinearInTypeUtility",
    "UtilityModel",
]
