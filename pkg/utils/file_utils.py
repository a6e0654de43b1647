"""
파일 처리 유틸리티

보고서(JSON)와 추적 기록(CSV) 출력을 위한 헬퍼 함수들을 제공합니다.
"""

import json
import math
from pathlib import Path
from typing import Any, Iterable, List, Mapping, Union
import logging

import numpy as np
import pandas as pd

from config.settings import FLOAT_FORMAT

logger = logging.getLogger(__name__)


def ensure_directory(directory_path: Union[str, Path]) -> Path:
    """디렉토리가 존재하지 않으면 생성

    Args:
        directory_path: 생성할 디렉토리 경로

    Returns:
        Path: 디렉토리 경로
    """
    path = Path(directory_path)
    if not path.exists():
        path.mkdir(parents=True, exist_ok=True)
        logger.info(f"Directory created: {path}")
    return path


def to_jsonable(value: Any) -> Any:
    """numpy 스칼라/배열과 무한대를 JSON 으로 표현 가능한 값으로 변환"""
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return None
        return value
    if isinstance(value, Path):
        return str(value)
    return value


def write_json(data: Mapping[str, Any], file_path: Union[str, Path]) -> Path:
    """보고서를 JSON 으로 저장 (indent 2, 키 정렬)

    Args:
        data: 저장할 사전
        file_path: 출력 경로

    Returns:
        Path: 저장된 파일 경로
    """
    path = Path(file_path)
    ensure_directory(path.parent)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(to_jsonable(data), f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")
    logger.info(f"Report written: {path}")
    return path


def write_csv(frame: pd.DataFrame, file_path: Union[str, Path]) -> Path:
    """표를 12 유효숫자 CSV 로 저장"""
    path = Path(file_path)
    ensure_directory(path.parent)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"CSV written: {path} ({len(frame)} rows)")
    return path


def read_text(file_path: Union[str, Path]) -> str:
    """UTF-8 텍스트 파일 읽기"""
    path = Path(file_path)
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        logger.error(f"File not found: {path}")
        raise


def output_paths(out_dir: Union[str, Path], stem: str, suffixes: Iterable[str]) -> List[Path]:
    """<out_dir>/<stem><suffix> 경로 목록"""
    base = Path(out_dir)
    return [base / f"{stem}{suffix}" for suffix in suffixes]
