import json
import operator
from typing import Any, Dict

from typing_extensions import Annotated, Sequence, TypedDict


def merge_dicts(a: Dict[str, Any], b: Dict[str, Any]) -> Dict[str, Any]:
    return {**a, **b}


# Define run state
class RunState(TypedDict):
    messages: Annotated[Sequence[str], operator.add]
    data: Annotated[Dict[str, Any], merge_dicts]
    metadata: Annotated[Dict[str, Any], merge_dicts]


def convert_to_serializable(obj):
    if hasattr(obj, "model_dump"):  # pydantic models
        return obj.model_dump(mode="json")
    elif hasattr(obj, "to_dict"):  # pandas Series/DataFrame
        return obj.to_dict()
    elif hasattr(obj, "item") and not hasattr(obj, "__len__"):  # numpy scalars
        return obj.item()
    elif isinstance(obj, (int, float, bool, str)) or obj is None:
        return obj
    elif isinstance(obj, (list, tuple)):
        return [convert_to_serializable(item) for item in obj]
    elif isinstance(obj, dict):
        return {str(key): convert_to_serializable(value) for key, value in obj.items()}
    elif hasattr(obj, "__dict__"):
        return convert_to_serializable(vars(obj))
    else:
        return str(obj)


def show_run_summary(output, title):
    print(f"\n{'=' * 10} {title.center(28)} {'=' * 10}")
    print(json.dumps(convert_to_serializable(output), indent=2))
