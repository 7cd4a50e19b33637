"""지형 탐침 및 적대적 증명서 패키지"""
